#include "cnf.hh"

#include <algorithm>
#include <charconv>
#include <unordered_set>

namespace cpog {

namespace {

// Whitespace-delimited token scanner that tracks line/column for
// diagnostics.  Comment handling is the caller's job since CNF keeps
// weight annotations inside comments.
class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    // Peek at the first character of the next token (0 at EOF).
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : 0;
    }

    std::string_view token() {
        skip_space();
        size_t start = tok_start_col_ = col_;
        (void)start;
        size_t begin = pos_;
        while (pos_ < text_.size() && !isspace((unsigned char)text_[pos_])) {
            pos_++;
            col_++;
        }
        return text_.substr(begin, pos_ - begin);
    }

    int64_t integer(const char *what) {
        std::string_view tok = token();
        if (tok.empty())
            fail(std::string("unexpected end of file, expected ") + what);
        int64_t value = 0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
            fail("expected " + std::string(what) + ", found '" + std::string(tok) + "'");
        return value;
    }

    // Rest of the current line, with the newline consumed.
    std::string_view rest_of_line() {
        size_t begin = pos_;
        while (pos_ < text_.size() && text_[pos_] != '\n')
            pos_++;
        std::string_view r = text_.substr(begin, pos_ - begin);
        if (pos_ < text_.size()) {
            pos_++;
            line_++;
            col_ = 1;
        }
        return r;
    }

    [[noreturn]] void fail(const std::string &msg) const {
        throw ParseError(line_, (int)tok_start_col_, msg);
    }

    int line() const { return line_; }

private:
    void skip_space() {
        while (pos_ < text_.size() && isspace((unsigned char)text_[pos_])) {
            if (text_[pos_] == '\n') {
                line_++;
                col_ = 1;
            } else {
                col_++;
            }
            pos_++;
        }
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    size_t col_ = 1;
    size_t tok_start_col_ = 0;
};

} // namespace

bool clause_is_tautology(std::span<const Lit> lits) {
    if (lits.size() < 2)
        return false;
    std::unordered_set<Lit> seen;
    seen.reserve(lits.size() * 2);
    for (Lit l : lits) {
        if (seen.count(-l))
            return true;
        seen.insert(l);
    }
    return false;
}

bool clause_has_duplicates(std::span<const Lit> lits) {
    std::unordered_set<Lit> seen;
    seen.reserve(lits.size() * 2);
    for (Lit l : lits)
        if (!seen.insert(l).second)
            return true;
    return false;
}

CnfFormula parse_dimacs(std::string_view text) {
    Scanner sc(text);
    CnfFormula f;

    // Leading comments, then the problem line.
    bool have_header = false;
    while (!sc.at_end()) {
        char c = sc.peek();
        if (c == 'c') {
            sc.token();
            std::string_view rest = sc.rest_of_line();
            // Weight annotation: "c p weight <lit> <w> 0"
            Scanner ws(rest);
            if (!ws.at_end()) {
                std::string_view t1 = ws.token();
                if (t1 == "p") {
                    std::string_view t2 = ws.token();
                    if (t2 == "weight") {
                        int64_t lit = ws.integer("weight literal");
                        std::string w(ws.token());
                        int64_t zero = ws.integer("terminating zero");
                        if (lit == 0 || w.empty() || zero != 0)
                            sc.fail("malformed weight annotation");
                        f.weight_lines.emplace_back(lit, w);
                    }
                }
            }
            continue;
        }
        if (c == 'p') {
            std::string_view tok = sc.token();
            if (tok != "p")
                sc.fail("expected DIMACS header 'p cnf <vars> <clauses>'");
            std::string_view kind = sc.token();
            if (kind != "cnf")
                sc.fail("expected 'cnf' in DIMACS header");
            int64_t nv = sc.integer("variable count");
            int64_t nc = sc.integer("clause count");
            if (nv < 0 || nc < 0)
                sc.fail("negative count in DIMACS header");
            f.var_count = nv;
            f.clauses.reserve((size_t)nc);
            have_header = true;

            // Clause bodies: zero-terminated integer runs, comments allowed.
            std::vector<Lit> cur;
            while (!sc.at_end()) {
                if (sc.peek() == 'c') {
                    if (!cur.empty())
                        sc.fail("comment inside a clause");
                    sc.token();
                    std::string_view rest = sc.rest_of_line();
                    Scanner ws(rest);
                    if (!ws.at_end() && ws.token() == "p") {
                        if (!ws.at_end() && ws.token() == "weight") {
                            int64_t lit = ws.integer("weight literal");
                            std::string w(ws.token());
                            int64_t zero = ws.integer("terminating zero");
                            if (lit == 0 || w.empty() || zero != 0)
                                sc.fail("malformed weight annotation");
                            f.weight_lines.emplace_back(lit, w);
                        }
                    }
                    continue;
                }
                int64_t v = sc.integer("literal");
                if (v == 0) {
                    f.clauses.push_back(cur);
                    cur.clear();
                } else {
                    if (var_of(v) > f.var_count)
                        sc.fail("literal " + std::to_string(v) + " exceeds declared variable count " +
                                std::to_string(f.var_count));
                    cur.push_back(v);
                }
            }
            if (!cur.empty())
                sc.fail("unterminated clause at end of file");
            if ((int64_t)f.clauses.size() != nc)
                sc.fail("header declared " + std::to_string(nc) + " clauses, file has " +
                        std::to_string((int64_t)f.clauses.size()));
            break;
        }
        sc.fail("expected comment or DIMACS header");
    }
    if (!have_header)
        throw ParseError(sc.line(), 0, "missing DIMACS header");
    return f;
}

std::string format_dimacs(const CnfFormula &f) {
    std::string out;
    out += "p cnf " + std::to_string(f.var_count) + " " + std::to_string(f.clauses.size()) + "\n";
    for (const auto &[lit, w] : f.weight_lines)
        out += "c p weight " + std::to_string(lit) + " " + w + " 0\n";
    for (const auto &cl : f.clauses) {
        for (Lit l : cl) {
            out += std::to_string(l);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

} // namespace cpog
