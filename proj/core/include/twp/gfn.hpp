#pragma once

#include <iosfwd>
#include <string>

#include "twp/grid.hpp"

namespace twp {

// .gfn: one JSON header line {"n", "l", "layout": "row-major", "dtype": "c128"}
// followed by N*N little-endian float64 (re, im) pairs.
void write_gfn(std::ostream& out, const GridFunction2D& f);
void write_gfn(const std::string& path, const GridFunction2D& f);
GridFunction2D read_gfn(std::istream& in);
GridFunction2D read_gfn(const std::string& path);

}  // namespace twp
