#pragma once

#include <string>

#include "litho/field.hpp"

namespace litho {

// Full-precision field file:
//   LITHOFIELD 1 <rows> <cols> <dx_nm> <dy_nm> <real|complex>
// followed by whitespace-separated decimal values (17 significant digits),
// row-major; complex fields store interleaved (re, im) pairs. Lossless for
// float64, human-auditable. All writes are atomic (temp file + rename).
struct FieldFile {
    int rows = 0, cols = 0;
    double dx_nm = 0.0, dy_nm = 0.0;
    bool is_complex = false;
    RealField real;
    ComplexField cplx;
};

void write_field(const std::string& path, const RealField& f, double dx_nm, double dy_nm);
void write_field(const std::string& path, const ComplexField& f, double dx_nm, double dy_nm);
FieldFile read_field(const std::string& path);

// PGM rasters (maxval 255). Values are clamped to [0,1] and mapped by
// round(255*u). Text (P2) is written by default for diffability; the reader
// accepts P2 and P5.
void write_pgm(const std::string& path, const RealField& u01, bool binary_format = false);
RealField read_pgm(const std::string& path); // back to [0,1]

// PBM bit rasters for exact binary patterns (1 = foreground). Reader accepts
// P1 and P4.
void write_pbm(const std::string& path, const RealField& indicator, bool binary_format = false);
RealField read_pbm(const std::string& path);

// 3-level comparison raster: 0 where the target is not covered by the exposed
// pattern, 255 where the exposed pattern spills outside the target, 128 where
// the two agree.
void write_diff_pgm(const std::string& path, const RealField& exposed, const RealField& target);

// small filesystem helpers shared by the workbench
void atomic_write_text(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace litho
