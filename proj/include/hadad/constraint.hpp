#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hadad/atom.hpp"

namespace hadad {

enum class ConstraintKind { Tgd, Egd };

struct Constraint {
    ConstraintKind kind = ConstraintKind::Tgd;
    std::string id;
    std::vector<Atom> premise;
    std::vector<Atom> conclusion;
    std::vector<std::pair<TermId, TermId>> equalities;
    std::vector<TermId> existentials;
};

// Parses the rule text: comma-separated atoms, '->', conclusion atoms or
// equalities, ';'. '#' starts a comment. Quoted strings are name constants,
// bare integers are dimension constants, identifiers are variables. Rules
// whose conclusion is a list of equalities are EGDs.
std::vector<Constraint> parse_constraints(Symbols& sym, const std::string& text,
                                          const std::string& source);

std::vector<Constraint> load_constraint_file(Symbols& sym, const std::string& path);

// Built-in constraint packs, by name. "mmc" is the union of "mmc_m" and
// "la_prop".
std::vector<std::string> builtin_pack_names();
std::vector<Constraint> load_pack(Symbols& sym, const std::string& name);
std::vector<Constraint> load_packs(Symbols& sym, const std::vector<std::string>& names);

}
