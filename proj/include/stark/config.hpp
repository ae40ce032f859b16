#ifndef STARK_CONFIG_HPP
#define STARK_CONFIG_HPP

// Experiment configuration: a strict line-oriented `key = value` format with
// [section] headers.  Unknown sections or keys are hard errors (no silent
// typos), full-line comments start with '#'.  Serialization is canonical so
// identical configs round-trip byte for byte.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "stark/drive.hpp"
#include "stark/lattice.hpp"

namespace stark {

struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& msg)
        : std::runtime_error("config line " + std::to_string(line_) + ": " + msg),
          line(line_) {}
};

struct InitialConfig {
    enum class Type { Gaussian, Cigar, Packets };
    Type type = Type::Gaussian;
    double width = 3.0;   // gaussian and packet width
    double width_x = 3.0; // cigar
    double width_y = 1.3;
    double center_x = 0.0, center_y = 0.0;  // well indices
    std::vector<std::array<double, 2>> packets;
};

struct EnvelopeSpec {
    enum class Kind { Zero, Const, Cos };
    Kind kind = Kind::Zero;
    double amp = 0.0;
    double omega_divisor = 0.0;  // Cos: alpha = amp cos((omega_B/divisor) t)
};

struct DriveConfig {
    enum class Source { Preset, Path, Waveform };
    Source source = Source::Preset;
    std::string preset;
    PathSpec path;
    EnvelopeSpec envelope_x, envelope_y;
    double beta_x = 0.0, beta_y = 0.0;
    DriveWaveform::Profile profile = DriveWaveform::Profile::None;
    double profile_k = 0.0;
    bool literal_beat = false;
};

struct GridConfig {
    int points_per_period = 32;
    // wells <= 0 means "auto": sized from the predicted path extent
    int wells_x = 0, wells_y = 0;
    // origin < 0 means centered (or auto-placed for auto boxes)
    int origin_x = -1, origin_y = -1;
};

struct RunConfig {
    std::string engine = "grid2d_separable";
    double duration_tb = -1.0;  // -1: take the preset's natural duration
    int dt_fraction = 500;      // dt = T_B / dt_fraction
    int samples_per_tb = 10;
    double frame_stride_tb = 1.0;  // 0 disables frames
    std::string dispersion_ref = "centroid";  // or "origin"
};

struct ExperimentConfig {
    LatticeParams lattice;
    GridConfig grid;
    InitialConfig initial;
    DriveConfig drive;
    RunConfig run;

    void validate() const;  // cross-field rules (engine/drive compatibility...)
    std::string serialize() const;
};

ExperimentConfig parse_config(const std::string& text);

const std::vector<std::string>& known_presets();
const std::vector<std::string>& known_engines();

}  // namespace stark

#endif
