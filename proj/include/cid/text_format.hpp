#ifndef CID_TEXT_FORMAT_HPP
#define CID_TEXT_FORMAT_HPP

#include <string>

#include "cid/graph.hpp"
#include "cid/model.hpp"

namespace cid {

// .cid text format:
//   line      := comment | cid-decl | node-decl | edge-decl | blank
//   comment   := "#" any-text
//   cid-decl  := "cid" WS name                (first non-comment line)
//   node-decl := "node" WS id WS kind [WS "label=" quoted-string]
//   kind      := "chance" | "decision" | "utility"
//   edge-decl := "edge" WS id WS "->" WS id   (the arrow may be omitted)
// Edges may reference nodes declared later in the file.
CidGraph parse_cid(const std::string& text);

// Canonical form: nodes in declaration order, then edges sorted
// lexicographically by (src, dst).
std::string serialize_cid(const CidGraph& graph);

struct ParseOptions {
    int max_domain_size = 4;
};

// .cidm = .cid lines plus:
//   domain-decl := "domain" WS id WS value+
//   cpt-decl    := "cpt" WS id NEWLINE row+
//   row         := INDENT parent-values ":" prob+
// Parent values appear in graph parent order; probabilities follow the
// node's domain order. Root nodes use one row with nothing before ":".
CidModel parse_model(const std::string& text, const ParseOptions& options = {});

std::string serialize_model(const CidModel& model);

} // namespace cid

#endif // CID_TEXT_FORMAT_HPP
