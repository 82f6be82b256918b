#include "cpog_file.hh"

#include <charconv>

namespace cpog {

namespace {

class Tokens {
public:
    explicit Tokens(std::string_view text) : text_(text) {}

    // Next token, skipping whitespace and comment lines.
    // Empty view at end of input.
    std::string_view next() {
        for (;;) {
            skip_space();
            if (pos_ >= text_.size())
                return {};
            if (text_[pos_] == 'c' &&
                (pos_ + 1 >= text_.size() || isspace((unsigned char)text_[pos_ + 1]))) {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    pos_++;
                continue;
            }
            break;
        }
        size_t begin = pos_;
        while (pos_ < text_.size() && !isspace((unsigned char)text_[pos_]))
            pos_++;
        return text_.substr(begin, pos_ - begin);
    }

    int64_t integer(const char *what) {
        std::string_view tok = next();
        return to_int(tok, what);
    }

    int64_t to_int(std::string_view tok, const char *what) {
        if (tok.empty())
            fail(std::string("unexpected end of file, expected ") + what);
        int64_t v = 0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
            fail("expected " + std::string(what) + ", found '" + std::string(tok) + "'");
        return v;
    }

    [[noreturn]] void fail(const std::string &msg) {
        int line = 1;
        for (size_t i = 0; i < pos_ && i < text_.size(); i++)
            if (text_[i] == '\n')
                line++;
        throw ParseError(line, 0, msg);
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && isspace((unsigned char)text_[pos_]))
            pos_++;
    }

    std::string_view text_;
    size_t pos_ = 0;
};

} // namespace

std::vector<CpogStep> parse_cpog(std::string_view text) {
    Tokens tk(text);
    std::vector<CpogStep> steps;
    bool have_root = false;
    for (;;) {
        std::string_view tok = tk.next();
        if (tok.empty())
            break;
        if (tok == "r") {
            if (have_root)
                tk.fail("duplicate root declaration");
            have_root = true;
            int64_t lit = tk.integer("root literal");
            if (lit == 0)
                tk.fail("root literal must be nonzero");
            steps.push_back(RootStep{lit});
            continue;
        }
        if (tok == "d") {
            DeleteStep st;
            st.id = tk.integer("clause id");
            if (st.id <= 0)
                tk.fail("deletion needs a positive clause id");
            for (;;) {
                int64_t v = tk.integer("hint id or 0");
                if (v == 0)
                    break;
                if (v < 0)
                    tk.fail("negative hint id");
                st.hints.push_back(v);
            }
            steps.push_back(std::move(st));
            continue;
        }
        // Remaining forms start with a clause ID.
        int64_t id = tk.to_int(tok, "step id");
        if (id <= 0)
            tk.fail("step id must be positive");
        std::string_view cmd = tk.next();
        if (cmd == "a") {
            AddStep st;
            st.id = id;
            for (;;) {
                int64_t v = tk.integer("literal or 0");
                if (v == 0)
                    break;
                st.lits.push_back(v);
            }
            for (;;) {
                int64_t v = tk.integer("hint id or 0");
                if (v == 0)
                    break;
                if (v < 0)
                    tk.fail("negative hint id");
                st.hints.push_back(v);
            }
            steps.push_back(std::move(st));
        } else if (cmd == "p") {
            ProductStep st;
            st.id = id;
            int64_t v = tk.integer("extension variable");
            if (v <= 0)
                tk.fail("extension variable must be positive");
            st.ext_var = v;
            for (;;) {
                int64_t a = tk.integer("argument literal or 0");
                if (a == 0)
                    break;
                st.args.push_back(a);
            }
            steps.push_back(std::move(st));
        } else if (cmd == "s") {
            SumStep st;
            st.id = id;
            int64_t v = tk.integer("extension variable");
            if (v <= 0)
                tk.fail("extension variable must be positive");
            st.ext_var = v;
            st.left = tk.integer("first argument literal");
            st.right = tk.integer("second argument literal");
            if (st.left == 0 || st.right == 0)
                tk.fail("sum arguments must be nonzero literals");
            for (;;) {
                int64_t h = tk.integer("hint id or 0");
                if (h == 0)
                    break;
                if (h < 0)
                    tk.fail("negative hint id");
                st.hints.push_back(h);
            }
            steps.push_back(std::move(st));
        } else if (cmd.empty()) {
            tk.fail("unexpected end of file after step id");
        } else {
            tk.fail("unknown step type '" + std::string(cmd) + "'");
        }
    }
    if (!have_root)
        tk.fail("missing root declaration");
    return steps;
}

std::string serialize_step(const CpogStep &step) {
    std::string out;
    auto ints = [&out](auto first, auto last) {
        for (auto it = first; it != last; ++it) {
            out += std::to_string(*it);
            out += ' ';
        }
    };
    if (const auto *a = std::get_if<AddStep>(&step)) {
        out += std::to_string(a->id) + " a ";
        ints(a->lits.begin(), a->lits.end());
        out += "0 ";
        ints(a->hints.begin(), a->hints.end());
        out += "0";
    } else if (const auto *d = std::get_if<DeleteStep>(&step)) {
        out += "d " + std::to_string(d->id) + " ";
        ints(d->hints.begin(), d->hints.end());
        out += "0";
    } else if (const auto *p = std::get_if<ProductStep>(&step)) {
        out += std::to_string(p->id) + " p " + std::to_string(p->ext_var) + " ";
        ints(p->args.begin(), p->args.end());
        out += "0";
    } else if (const auto *s = std::get_if<SumStep>(&step)) {
        out += std::to_string(s->id) + " s " + std::to_string(s->ext_var) + " " +
               std::to_string(s->left) + " " + std::to_string(s->right) + " ";
        ints(s->hints.begin(), s->hints.end());
        out += "0";
    } else {
        const auto &r = std::get<RootStep>(step);
        out += "r " + std::to_string(r.lit);
    }
    return out;
}

std::string serialize_cpog(const std::vector<CpogStep> &steps) {
    std::string out;
    for (const auto &st : steps) {
        out += serialize_step(st);
        out += '\n';
    }
    return out;
}

std::vector<std::pair<ClauseId, std::vector<Lit>>> expand_defining(const ProductStep &step) {
    std::vector<std::pair<ClauseId, std::vector<Lit>>> out;
    std::vector<Lit> first;
    first.push_back((Lit)step.ext_var);
    for (Lit a : step.args)
        first.push_back(-a);
    out.emplace_back(step.id, std::move(first));
    for (size_t j = 0; j < step.args.size(); j++)
        out.emplace_back(step.id + (ClauseId)j + 1,
                         std::vector<Lit>{-(Lit)step.ext_var, step.args[j]});
    return out;
}

std::vector<std::pair<ClauseId, std::vector<Lit>>> expand_defining(const SumStep &step) {
    std::vector<std::pair<ClauseId, std::vector<Lit>>> out;
    out.emplace_back(step.id, std::vector<Lit>{-(Lit)step.ext_var, step.left, step.right});
    out.emplace_back(step.id + 1, std::vector<Lit>{(Lit)step.ext_var, -step.left});
    out.emplace_back(step.id + 2, std::vector<Lit>{(Lit)step.ext_var, -step.right});
    return out;
}

} // namespace cpog
