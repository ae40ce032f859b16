#ifndef STARK_PRESETS_HPP
#define STARK_PRESETS_HPP

// The five canned experiments (square, lissajous, beta_path, concentration,
// rotation) as runnable configs, and the translation of any drive block into
// concrete waveforms.

#include "stark/config.hpp"
#include "stark/drive.hpp"

namespace stark {

ExperimentConfig make_preset(const std::string& name);

struct MaterializedDrive {
    DriveWaveform x, y;
    double duration = 0.0;  // absolute time (resolves duration_tb = -1)
};

// Turns the config's drive block (preset name, path, or explicit waveform)
// into sampled envelopes.  Needs the basis and the packet coherence because
// compiled paths and the concentration preset invert the velocity law.
MaterializedDrive materialize_drives(const ExperimentConfig& cfg,
                                     const WannierStarkBasis& basis_x,
                                     const WannierStarkBasis& basis_y,
                                     const Coherence& sigma);

}  // namespace stark

#endif
