#pragma once

#include <string>

#include "json.hpp"

#include "cinfty/invariants.hpp"
#include "cinfty/transfer.hpp"

namespace cinfty {

enum class AlgebraKind { Dga, Cdga, Ainf, Cinf };

std::string kind_str(AlgebraKind k);
AlgebraKind kind_of(const std::string& s);

// One parsed algebra file: a dg(c) algebra or an A-/C-infinity structure.
// Parsing is structural only (names, degrees, table shapes); the axioms are
// checked separately so the CLI can distinguish parse errors from axiom
// failures.
struct LoadedAlgebra {
    AlgebraKind kind = AlgebraKind::Ainf;
    std::optional<DgAlgebra> dga;
    std::optional<AInfStructure> structure;
};

LoadedAlgebra parse_algebra(const nlohmann::json& j);
LoadedAlgebra load_algebra_file(const std::string& path);

// Axiom validation per kind; throws AxiomError naming the failing axiom.
// max_degree bounds the bar-level checks for ainf/cinf kinds; dg(c)a axioms
// are finite and checked in full.
void validate_algebra(const LoadedAlgebra& a, int max_degree);

// The structure view of any loaded algebra (dgas through dga_as_ainf).
AInfStructure structure_view(const LoadedAlgebra& a);

nlohmann::json algebra_to_json(const LoadedAlgebra& a);
nlohmann::json structure_to_json(const AInfStructure& s, bool cinf_kind);
nlohmann::json dga_to_json(const DgAlgebra& a);

struct LoadedMorphism {
    LoadedAlgebra source, target;
    AInfMorphism morphism;
};

// Morphism files carry "source"/"target" either inline or as file paths
// (resolved relative to `base_dir`), plus the component tables.
LoadedMorphism parse_morphism(const nlohmann::json& j, const std::string& base_dir);
LoadedMorphism load_morphism_file(const std::string& path);
nlohmann::json morphism_to_json(const AInfMorphism& f, bool source_cinf, bool target_cinf);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Canonical textual form: two-space indent, keys sorted, one trailing newline.
std::string dump_canonical(const nlohmann::json& j);

}  // namespace cinfty
