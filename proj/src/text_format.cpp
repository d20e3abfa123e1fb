#include "cid/text_format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace cid {

namespace {

struct Line {
    int number = 0;
    bool indented = false;
    std::vector<std::string> tokens;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Splits a line into whitespace-separated tokens. A token that reaches a `"`
// swallows the quoted remainder (for label="..."), honoring \" and \\.
std::vector<std::string> tokenize(const std::string& line, int line_no) {
    std::vector<std::string> tokens;
    size_t i = 0;
    while (i < line.size()) {
        if (is_space(line[i])) {
            ++i;
            continue;
        }
        if (line[i] == '#')
            break;
        size_t start = i;
        std::string token;
        bool in_quotes = false;
        while (i < line.size()) {
            char c = line[i];
            if (in_quotes) {
                token += c;
                if (c == '\\') {
                    if (i + 1 >= line.size())
                        throw CidError(ErrorCode::SyntaxError, "unterminated escape", line_no,
                                       static_cast<int>(i) + 1);
                    token += line[i + 1];
                    i += 2;
                    continue;
                }
                if (c == '"')
                    in_quotes = false;
                ++i;
                continue;
            }
            if (is_space(c) || c == '#')
                break;
            token += c;
            if (c == '"')
                in_quotes = true;
            ++i;
        }
        if (in_quotes)
            throw CidError(ErrorCode::SyntaxError, "unterminated quoted string", line_no,
                           static_cast<int>(start) + 1);
        tokens.push_back(token);
    }
    return tokens;
}

std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        Line line;
        line.number = number;
        line.indented = !raw.empty() && is_space(raw[0]);
        line.tokens = tokenize(raw, number);
        if (line.tokens.empty())
            continue;
        lines.push_back(std::move(line));
    }
    return lines;
}

std::string unescape_label(const std::string& token, int line_no) {
    const std::string prefix = "label=\"";
    if (token.size() < prefix.size() + 1 || token.compare(0, prefix.size(), prefix) != 0 ||
        token.back() != '"')
        throw CidError(ErrorCode::SyntaxError, "malformed label attribute '" + token + "'", line_no);
    std::string body = token.substr(prefix.size(), token.size() - prefix.size() - 1);
    std::string out;
    for (size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '\\') {
            if (i + 1 >= body.size())
                throw CidError(ErrorCode::SyntaxError, "unterminated escape in label", line_no);
            out += body[i + 1];
            ++i;
        } else {
            out += body[i];
        }
    }
    return out;
}

std::string escape_label(const std::string& label) {
    std::string out;
    for (char c : label) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

struct NodeDecl {
    std::string id;
    NodeKind kind;
    std::string label;
    int line;
};
struct EdgeDecl {
    std::string src, dst;
    int line;
};

// Shared front half of both formats: cid-decl, node-decls and edge-decls.
// `rest`, when non-null, receives the lines the graph grammar does not know.
CidGraph parse_graph_lines(const std::vector<Line>& lines, std::vector<Line>* rest) {
    std::string name;
    bool saw_cid = false;
    std::vector<NodeDecl> node_decls;
    std::vector<EdgeDecl> edge_decls;

    for (const auto& line : lines) {
        const auto& t = line.tokens;
        const std::string& kw = t[0];
        if (!saw_cid) {
            if (line.indented || kw != "cid")
                throw CidError(ErrorCode::SyntaxError, "expected 'cid <name>' as first declaration",
                               line.number, 1);
            if (t.size() != 2)
                throw CidError(ErrorCode::SyntaxError, "expected 'cid <name>'", line.number);
            name = t[1];
            saw_cid = true;
            continue;
        }
        if (!line.indented && kw == "cid")
            throw CidError(ErrorCode::SyntaxError, "duplicate cid declaration", line.number);
        if (!line.indented && kw == "node") {
            if (t.size() < 3 || t.size() > 4)
                throw CidError(ErrorCode::SyntaxError, "expected 'node <id> <kind> [label=\"...\"]'",
                               line.number);
            if (!is_valid_node_id(t[1]))
                throw CidError(ErrorCode::SyntaxError, "bad node id '" + t[1] + "'", line.number);
            NodeKind kind;
            try {
                kind = node_kind_from_name(t[2]);
            } catch (const CidError& e) {
                throw CidError(ErrorCode::SyntaxError, e.what(), line.number);
            }
            std::string label = t.size() == 4 ? unescape_label(t[3], line.number) : "";
            node_decls.push_back({t[1], kind, label, line.number});
            continue;
        }
        if (!line.indented && kw == "edge") {
            std::vector<std::string> args(t.begin() + 1, t.end());
            if (args.size() == 3 && args[1] == "->")
                args.erase(args.begin() + 1);
            if (args.size() != 2)
                throw CidError(ErrorCode::SyntaxError, "expected 'edge <id> -> <id>'", line.number);
            edge_decls.push_back({args[0], args[1], line.number});
            continue;
        }
        if (rest) {
            rest->push_back(line);
            continue;
        }
        throw CidError(ErrorCode::SyntaxError, "unknown declaration '" + kw + "'", line.number);
    }
    if (!saw_cid)
        throw CidError(ErrorCode::SyntaxError, "empty input: expected 'cid <name>'", 1);

    CidGraph graph(name);
    for (const auto& d : node_decls) {
        try {
            graph.add_node(d.id, d.kind, d.label);
        } catch (const CidError& e) {
            throw CidError(e.code(), e.what(), d.line);
        }
    }
    // Second pass so edges may reference nodes declared later in the file.
    for (const auto& d : edge_decls) {
        try {
            graph.add_edge(d.src, d.dst);
        } catch (const CidError& e) {
            throw CidError(e.code(), e.what(), d.line);
        }
    }
    if (!graph.is_acyclic())
        throw CidError(ErrorCode::CycleDetected, "graph contains a directed cycle");
    return graph;
}

std::string format_number(double v) {
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RawRow {
    std::vector<std::string> parent_values;
    std::vector<double> probs;
    int line;
};

} // namespace

Value Value::from_token(const std::string& token) {
    Value v;
    v.text = token;
    const char* begin = token.c_str();
    char* end = nullptr;
    double num = std::strtod(begin, &end);
    if (!token.empty() && end == begin + token.size() && std::isfinite(num)) {
        v.numeric = true;
        v.number = num;
    }
    return v;
}

Value Value::from_number(double v) {
    Value out;
    out.numeric = true;
    out.number = v;
    out.text = format_number(v);
    return out;
}

int Domain::find(const std::string& token) const {
    Value probe = Value::from_token(token);
    for (int i = 0; i < size(); ++i)
        if (values[i] == probe)
            return i;
    return -1;
}

bool Domain::all_numeric() const {
    return std::all_of(values.begin(), values.end(), [](const Value& v) { return v.numeric; });
}

CidGraph parse_cid(const std::string& text) {
    auto lines = split_lines(text);
    return parse_graph_lines(lines, nullptr);
}

std::string serialize_cid(const CidGraph& graph) {
    std::ostringstream out;
    out << "cid " << (graph.name().empty() ? "g" : graph.name()) << "\n";
    for (const auto& n : graph.nodes()) {
        out << "node " << n.id << " " << node_kind_name(n.kind);
        if (!n.label.empty())
            out << " label=\"" << escape_label(n.label) << "\"";
        out << "\n";
    }
    auto edges = graph.edges();
    std::sort(edges.begin(), edges.end());
    for (const auto& [s, d] : edges)
        out << "edge " << s << " -> " << d << "\n";
    return out.str();
}

CidModel parse_model(const std::string& text, const ParseOptions& options) {
    auto lines = split_lines(text);
    std::vector<Line> rest;
    CidModel model;
    model.graph = parse_graph_lines(lines, &rest);

    std::map<std::string, std::vector<RawRow>> raw_cpts;

    size_t i = 0;
    while (i < rest.size()) {
        const Line& line = rest[i];
        const auto& t = line.tokens;
        if (line.indented)
            throw CidError(ErrorCode::SyntaxError, "cpt row outside a cpt block", line.number, 1);
        if (t[0] == "domain") {
            if (t.size() < 3)
                throw CidError(ErrorCode::SyntaxError, "expected 'domain <id> <value>+'", line.number);
            if (!model.graph.has_node(t[1]))
                throw CidError(ErrorCode::UnknownNode, "domain for undeclared node '" + t[1] + "'",
                               line.number);
            if (model.domains.count(t[1]))
                throw CidError(ErrorCode::SyntaxError, "duplicate domain for node '" + t[1] + "'",
                               line.number);
            Domain dom;
            for (size_t k = 2; k < t.size(); ++k) {
                Value v = Value::from_token(t[k]);
                for (const auto& existing : dom.values)
                    if (existing == v)
                        throw CidError(ErrorCode::DomainMismatch,
                                       "duplicate domain value '" + t[k] + "' for node '" + t[1] + "'",
                                       line.number);
                dom.values.push_back(std::move(v));
            }
            if (options.max_domain_size > 0 && dom.size() > options.max_domain_size)
                throw CidError(ErrorCode::DomainMismatch,
                               "domain of '" + t[1] + "' exceeds the size cap of " +
                                   std::to_string(options.max_domain_size),
                               line.number);
            model.domains[t[1]] = std::move(dom);
            ++i;
            continue;
        }
        if (t[0] == "cpt") {
            if (t.size() != 2)
                throw CidError(ErrorCode::SyntaxError, "expected 'cpt <id>'", line.number);
            const std::string owner = t[1];
            if (!model.graph.has_node(owner))
                throw CidError(ErrorCode::UnknownNode, "cpt for undeclared node '" + owner + "'",
                               line.number);
            if (raw_cpts.count(owner))
                throw CidError(ErrorCode::SyntaxError, "duplicate cpt for node '" + owner + "'",
                               line.number);
            std::vector<RawRow> rows;
            ++i;
            while (i < rest.size() && rest[i].indented) {
                const Line& row = rest[i];
                auto sep = std::find(row.tokens.begin(), row.tokens.end(), ":");
                if (sep == row.tokens.end())
                    throw CidError(ErrorCode::SyntaxError, "cpt row missing ':'", row.number);
                RawRow raw;
                raw.parent_values.assign(row.tokens.begin(), sep);
                raw.line = row.number;
                for (auto it = sep + 1; it != row.tokens.end(); ++it) {
                    Value v = Value::from_token(*it);
                    if (!v.numeric)
                        throw CidError(ErrorCode::SyntaxError,
                                       "bad probability '" + *it + "' in cpt row", row.number);
                    raw.probs.push_back(v.number);
                }
                rows.push_back(std::move(raw));
                ++i;
            }
            raw_cpts[owner] = std::move(rows);
            continue;
        }
        throw CidError(ErrorCode::SyntaxError, "unknown declaration '" + t[0] + "'", line.number);
    }

    for (const auto& n : model.graph.nodes())
        if (!model.domains.count(n.id))
            throw CidError(ErrorCode::InvalidModel, "node '" + n.id + "' has no domain");

    // Resolve raw rows now that every domain is known.
    for (auto& [owner, rows] : raw_cpts) {
        if (model.graph.kind(owner) == NodeKind::Decision)
            throw CidError(ErrorCode::InvalidModel,
                           "decision node '" + owner + "' must not have a cpt");
        Cpt cpt;
        cpt.owner = owner;
        cpt.parent_order = model.graph.parents(owner);
        std::vector<int> radices;
        for (const auto& p : cpt.parent_order)
            radices.push_back(model.domains.at(p).size());
        long long total = 1;
        for (int r : radices)
            total *= r;
        cpt.rows.assign(static_cast<size_t>(total), {});
        const Domain& own_domain = model.domains.at(owner);
        for (const auto& raw : rows) {
            if (static_cast<int>(raw.parent_values.size()) != static_cast<int>(cpt.parent_order.size()))
                throw CidError(ErrorCode::DomainMismatch,
                               "cpt row for '" + owner + "' names " +
                                   std::to_string(raw.parent_values.size()) + " parent values, expected " +
                                   std::to_string(cpt.parent_order.size()),
                               raw.line);
            long long index = 0;
            for (size_t k = 0; k < raw.parent_values.size(); ++k) {
                int v = model.domains.at(cpt.parent_order[k]).find(raw.parent_values[k]);
                if (v < 0)
                    throw CidError(ErrorCode::DomainMismatch,
                                   "value '" + raw.parent_values[k] + "' not in the domain of '" +
                                       cpt.parent_order[k] + "'",
                                   raw.line);
                index = index * radices[k] + v;
            }
            if (!cpt.rows[index].empty())
                throw CidError(ErrorCode::SyntaxError, "duplicate cpt row for '" + owner + "'",
                               raw.line);
            if (static_cast<int>(raw.probs.size()) != own_domain.size())
                throw CidError(ErrorCode::DomainMismatch,
                               "cpt row for '" + owner + "' has " + std::to_string(raw.probs.size()) +
                                   " probabilities, domain has " + std::to_string(own_domain.size()),
                               raw.line);
            cpt.rows[index] = raw.probs;
        }
        for (size_t r = 0; r < cpt.rows.size(); ++r)
            if (cpt.rows[r].empty())
                throw CidError(ErrorCode::MissingCpt,
                               "cpt for '" + owner + "' is missing a row for a parent assignment");
        model.cpts[owner] = std::move(cpt);
    }

    check_model(model, options.max_domain_size);
    return model;
}

std::string serialize_model(const CidModel& model) {
    std::ostringstream out;
    out << serialize_cid(model.graph);
    for (const auto& n : model.graph.nodes()) {
        const Domain& dom = model.domains.at(n.id);
        out << "domain " << n.id;
        for (const auto& v : dom.values)
            out << " " << v.text;
        out << "\n";
    }
    for (const auto& n : model.graph.nodes()) {
        auto it = model.cpts.find(n.id);
        if (it == model.cpts.end())
            continue;
        const Cpt& cpt = it->second;
        out << "cpt " << n.id << "\n";
        // The canonical .cid part sorts edges, so the re-parsed graph lists
        // parents alphabetically; emit rows in that order.
        std::vector<size_t> perm(cpt.parent_order.size());
        for (size_t k = 0; k < perm.size(); ++k)
            perm[k] = k;
        std::sort(perm.begin(), perm.end(), [&](size_t a, size_t b) {
            return cpt.parent_order[a] < cpt.parent_order[b];
        });
        std::vector<int> decl_radices;
        for (const auto& p : cpt.parent_order)
            decl_radices.push_back(model.domains.at(p).size());
        std::vector<int> sorted_radices;
        for (size_t k : perm)
            sorted_radices.push_back(decl_radices[k]);
        std::vector<int> digits(perm.size(), 0);
        do {
            std::vector<int> decl_digits(perm.size(), 0);
            for (size_t k = 0; k < perm.size(); ++k)
                decl_digits[perm[k]] = digits[k];
            long long row = 0;
            for (size_t k = 0; k < perm.size(); ++k)
                row = row * decl_radices[k] + decl_digits[k];
            out << " ";
            for (size_t k = 0; k < perm.size(); ++k)
                out << " "
                    << model.domains.at(cpt.parent_order[perm[k]]).values[digits[k]].text;
            out << " :";
            for (double p : cpt.rows[row])
                out << " " << format_number(p);
            out << "\n";
        } while (detail::radix_increment(digits, sorted_radices));
    }
    return out.str();
}

} // namespace cid
