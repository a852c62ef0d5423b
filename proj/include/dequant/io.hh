#pragma once

#include <iosfwd>
#include <string>

#include "dequant/types.hh"

namespace dequant {

struct SketchDescription;

// Dense CSV: one matrix row per line, entries `re` or `re+imj` / `re-imj`.
Mat read_dense_csv(std::istream& in);
Mat read_dense_csv(const std::string& path);
void write_dense_csv(std::ostream& out, const Mat& a);
void write_dense_csv(const std::string& path, const Mat& a);

// Sparse triplets: `i j re im` per line, 0-based; '#' starts a comment.
// Dimensions default to 1 + the largest index seen.
Mat read_sparse_triplets(std::istream& in, Index rows = -1, Index cols = -1);
void write_sparse_triplets(std::ostream& out, const Mat& a);

// `index,probability` with a header line.
void write_distribution_csv(std::ostream& out, const Distribution& p);
Distribution read_distribution_csv(std::istream& in);

// `i,s_i,alpha_i` with a header line.
void write_sketch_csv(std::ostream& out, const SketchDescription& s);
SketchDescription read_sketch_csv(std::istream& in, Index source_dim);

Complex parse_complex(const std::string& token);
std::string format_complex(Complex z);

}  // namespace dequant
