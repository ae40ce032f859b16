#include "stark/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stark {

std::string format_sci17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const SeriesTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    for (size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_sci17(row[i]);
        out << "\n";
    }
}

void write_frame_binary(const std::filesystem::path& path, const DensityImage& img,
                        double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "density " << img.nx << " " << img.ny << " " << format_sci17(img.spacing)
        << " " << format_sci17(img.origin_x) << " " << format_sci17(img.origin_y) << " "
        << format_sci17(time) << "\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size() * sizeof(double)));
}

DensityImage read_frame_binary(const std::filesystem::path& path, double* time) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string tag;
    DensityImage img;
    double t = 0;
    hs >> tag >> img.nx >> img.ny >> img.spacing >> img.origin_x >> img.origin_y >> t;
    if (tag != "density" || img.nx <= 0 || img.ny <= 0)
        throw std::runtime_error("bad frame header in " + path.string());
    img.data.resize(static_cast<size_t>(img.nx) * img.ny);
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated frame " + path.string());
    if (time) *time = t;
    return img;
}

void write_frame_pgm(const std::filesystem::path& path, const DensityImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    double mx = 0.0;
    for (double v : img.data) mx = std::max(mx, v);
    out << "P5\n" << img.nx << " " << img.ny << "\n255\n";
    std::vector<uint8_t> row(img.nx);
    // PGM rows run top to bottom; flip so +y points up in the image
    for (int j = img.ny - 1; j >= 0; --j) {
        for (int i = 0; i < img.nx; ++i) {
            double v = mx > 0 ? img.data[i + static_cast<size_t>(img.nx) * j] / mx : 0.0;
            row[i] = static_cast<uint8_t>(255.0 * v + 0.5);
        }
        out.write(reinterpret_cast<const char*>(row.data()), img.nx);
    }
}

}  // namespace stark
