#ifndef STARK_IO_HPP
#define STARK_IO_HPP

// Bit-stable file output: CSV in fixed 17-significant-digit scientific
// notation (identical configs must produce identical bytes), flat binary
// density frames with a one-line text header, and 8-bit PGM quick-look
// frames.

#include <filesystem>
#include <string>
#include <vector>

#include "stark/observables.hpp"

namespace stark {

std::string format_sci17(double v);

void write_csv(const std::filesystem::path& path, const SeriesTable& table);

void write_frame_binary(const std::filesystem::path& path, const DensityImage& img,
                        double time);

void write_frame_pgm(const std::filesystem::path& path, const DensityImage& img);

DensityImage read_frame_binary(const std::filesystem::path& path, double* time = nullptr);

}  // namespace stark

#endif
