#pragma once
//
// kronsvd/image_io.hpp: image and table files. PGM P2/P5 with maxval up to
// 65535 maps linearly to [0,1]; CSV carries raw doubles in shortest
// round-trip decimal form. All writes go through a temp file and rename.
//

#include "kronsvd/dense_matrix.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace kronsvd {

DenseMatrix load_pgm(const std::string& path);
DenseMatrix load_csv_matrix(const std::string& path);

// binary selects P5, otherwise P2; samples are 2 bytes big-endian when
// maxval exceeds 255. Values are clamped to [0,1] before quantization.
void save_pgm(const std::string& path, const DenseMatrix& image,
              bool binary = true, unsigned maxval = 65535);
void save_csv_matrix(const std::string& path, const DenseMatrix& m);

// Dispatch on extension: .pgm or .csv.
DenseMatrix load_image(const std::string& path);
void save_image(const std::string& path, const DenseMatrix& image);

// One value per line.
void save_csv_vector(const std::string& path, const std::vector<double>& v);
std::vector<double> load_csv_vector(const std::string& path);
void save_csv_indices(const std::string& path, const std::vector<std::size_t>& v);
std::vector<std::size_t> load_csv_indices(const std::string& path);

// Shortest decimal that parses back to exactly v.
std::string format_double(double v);

void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace kronsvd
