#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "selfsim/embed.hpp"
#include "selfsim/kep.hpp"
#include "selfsim/limitspace.hpp"
#include "selfsim/outsplit.hpp"
#include "selfsim/putnam.hpp"

namespace selfsim {

using Json = nlohmann::ordered_json;

Json parse_json(const std::string& text);      // throws INVALID_INPUT
Json read_json_file(const std::string& path);  // throws INVALID_INPUT

enum class DocKind { Katsura, EmbeddingPair, OutSplit, Graph, Unknown };
DocKind detect_kind(const Json& doc);
std::string to_string(DocKind k);
// Structural and semantic defects of any supported document.
std::vector<Defect> validate_document(const Json& doc);

KatsuraPair katsura_from_json(const Json& doc);
GraphDecl graph_decl_from_json(const Json& doc);
EmbeddingPairDecl embedding_pair_from_json(const Json& doc);
OutSplitSpec outsplit_spec_from_json(const Json& doc);
EPPath eppath_from_json(const Graph& g, const Json& doc);

Json to_json(const KatsuraPair& p);
Json to_json(const GraphDecl& g);
Json to_json(const Graph& g, const EPPath& mu);
Json path_json(const Graph& g, const std::vector<EdgeIndex>& edges);
Json to_json(const std::vector<Defect>& defects);
Json to_json(const AbelianGroup& a);
Json to_json(const KatsuraPair& p, const KepGraph& kg, const RegularityResult& r);
Json to_json(const KatsuraPair& p, const AnalysisReport& r);
Json to_json(const ComponentClass& c);
Json to_json(const std::vector<EmbedTerm>& terms);
std::string modulus_text(Modulus m);

}  // namespace selfsim
