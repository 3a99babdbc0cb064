#pragma once

#include <iosfwd>
#include <string>

#include "schouten/soliton.hpp"

namespace schouten {

/// Line-oriented metric-spec format.  Sections [chart], [potential],
/// [params]; `#` starts a comment.  Keys:
///   [chart]      dim = <int>; coords = name1 name2 ...;
///                g[i][j] = <expression> (1-based, i <= j, symmetry implied);
///                domain[i] = lo hi
///   [potential]  f = <expression>; lambda = <real>; f0 = <real> (optional)
///   [params]     <name> = <real>
/// Errors carry the 1-based line number.
SolitonData load_soliton(std::istream& is, const std::string& origin = "");
SolitonData load_soliton_file(const std::string& path);

void save_soliton(std::ostream& os, const SolitonData& sd);
void save_soliton_file(const std::string& path, const SolitonData& sd);

}  // namespace schouten
