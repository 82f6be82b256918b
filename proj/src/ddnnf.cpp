#include "ddnnf.hh"

#include <charconv>
#include <unordered_map>

namespace cpog {

namespace {

struct Line {
    int number;
    std::vector<int64_t> values;
    char tag; // 'o','a','t','f' or 0 for arc lines
};

} // namespace

DdnnfGraph parse_d4(std::string_view text) {
    DdnnfGraph g;
    std::unordered_map<int64_t, int64_t> id_map; // file id -> node index
    int line_no = 0;
    size_t pos = 0;
    auto fail = [&](const std::string &msg) -> void { throw ParseError(line_no, 0, msg); };

    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        line_no++;
        // Tokenize.
        std::vector<std::string_view> toks;
        size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && isspace((unsigned char)line[i]))
                i++;
            size_t b = i;
            while (i < line.size() && !isspace((unsigned char)line[i]))
                i++;
            if (i > b)
                toks.push_back(line.substr(b, i - b));
        }
        if (toks.empty())
            continue;
        if (toks[0] == "c")
            continue;
        auto to_int = [&](std::string_view t) -> int64_t {
            int64_t v = 0;
            auto res = std::from_chars(t.data(), t.data() + t.size(), v);
            if (res.ec != std::errc() || res.ptr != t.data() + t.size())
                fail("expected integer, found '" + std::string(t) + "'");
            return v;
        };
        if (toks[0] == "o" || toks[0] == "a" || toks[0] == "t" || toks[0] == "f") {
            if (toks.size() != 3 || to_int(toks[2]) != 0)
                fail("node line must be '<type> <id> 0'");
            int64_t id = to_int(toks[1]);
            if (id_map.count(id))
                fail("node id " + std::to_string(id) + " declared twice");
            DdnnfNode n;
            switch (toks[0][0]) {
            case 'o': n.kind = DdnnfNode::Kind::Or; break;
            case 'a': n.kind = DdnnfNode::Kind::And; break;
            case 't': n.kind = DdnnfNode::Kind::True; break;
            default: n.kind = DdnnfNode::Kind::False; break;
            }
            id_map.emplace(id, (int64_t)g.nodes.size());
            g.nodes.push_back(std::move(n));
        } else {
            if (toks.size() < 3)
                fail("arc line must be '<from> <to> <lits...> 0'");
            if (to_int(toks.back()) != 0)
                fail("arc line not zero-terminated");
            int64_t from = to_int(toks[0]);
            int64_t to = to_int(toks[1]);
            auto fit = id_map.find(from);
            auto tit = id_map.find(to);
            if (fit == id_map.end())
                fail("arc from undeclared node " + std::to_string(from));
            if (tit == id_map.end())
                fail("arc to undeclared node " + std::to_string(to));
            DdnnfNode &fn = g.nodes[(size_t)fit->second];
            if (fn.kind == DdnnfNode::Kind::True || fn.kind == DdnnfNode::Kind::False)
                fail("arc leaving terminal node " + std::to_string(from));
            DdnnfNode::Arc arc;
            arc.target = tit->second;
            for (size_t k = 2; k + 1 < toks.size(); k++) {
                int64_t lit = to_int(toks[k]);
                if (lit == 0)
                    fail("literal 0 inside arc");
                arc.lits.push_back(lit);
                g.max_var = std::max(g.max_var, var_of(lit));
            }
            g.nodes[(size_t)tit->second].indegree++;
            fn.arcs.push_back(std::move(arc));
        }
    }
    if (g.nodes.empty())
        throw ParseError(line_no, 0, "empty graph");

    // Root: the unique parentless node; prefer the first declared one.
    int64_t root = -1;
    for (size_t i = 0; i < g.nodes.size(); i++) {
        if (g.nodes[i].indegree == 0) {
            if (root < 0)
                root = (int64_t)i;
            else
                throw ParseError(line_no, 0, "multiple parentless nodes (ambiguous root)");
        }
    }
    if (root < 0)
        throw ParseError(line_no, 0, "no parentless node (cyclic graph)");
    g.root = root;

    // Cycle check: iterative DFS with colors.
    {
        std::vector<uint8_t> color(g.nodes.size(), 0);
        std::vector<std::pair<int64_t, size_t>> stack;
        for (size_t s = 0; s < g.nodes.size(); s++) {
            if (color[s])
                continue;
            stack.emplace_back((int64_t)s, 0);
            color[s] = 1;
            while (!stack.empty()) {
                auto &[n, ai] = stack.back();
                if (ai < g.nodes[(size_t)n].arcs.size()) {
                    int64_t child = g.nodes[(size_t)n].arcs[ai].target;
                    ai++;
                    if (color[(size_t)child] == 1)
                        throw ParseError(line_no, 0, "cycle through node index " +
                                                         std::to_string(child));
                    if (color[(size_t)child] == 0) {
                        color[(size_t)child] = 1;
                        stack.emplace_back(child, 0);
                    }
                } else {
                    color[(size_t)n] = 2;
                    stack.pop_back();
                }
            }
        }
    }

    // Or-node arity and decision-literal checks.
    for (size_t i = 0; i < g.nodes.size(); i++) {
        const DdnnfNode &n = g.nodes[i];
        if (n.kind != DdnnfNode::Kind::Or)
            continue;
        if (n.arcs.size() == 1)
            continue; // pass-through
        if (n.arcs.size() != 2)
            throw ParseError(line_no, 0, "or node with " + std::to_string(n.arcs.size()) +
                                             " arcs at index " + std::to_string(i));
        bool found = false;
        for (Lit l : n.arcs[0].lits) {
            for (Lit m : n.arcs[1].lits) {
                if (l == -m) {
                    found = true;
                    break;
                }
            }
            if (found)
                break;
        }
        if (!found)
            throw ParseError(line_no, 0, "or node without opposing decision literals at index " +
                                             std::to_string(i));
    }
    return g;
}

} // namespace cpog
