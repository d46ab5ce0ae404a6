#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fuzzynf/model.hpp"

namespace fnf {

/// Text dump of a structure:
///   fuzzynf-structure 1
///   level <n>
///   grid <k>
///   sets <|S|>
///   constant <name> <braces>      (one per crisp constant)
///   set <i> <label>               (one per member of S, in order)
///   mu <element> <set> <degree>   (element-major, then set order)
/// Crisp elements are written as braces, members of S as @label.
std::string write_dump(const FuzzyStructure& st);

/// Reloads a dump. Formulas are not stored, so the definitions come from the
/// caller and their labels must match the dump's sets. Every table entry must be
/// present exactly once and lie in the grid.
FuzzyStructure read_dump(std::string_view text, std::vector<SetDefinition> definitions);

}  // namespace fnf
