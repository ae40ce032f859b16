#include "stark/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace stark {

ExperimentConfig make_preset(const std::string& name) {
    ExperimentConfig cfg;  // paper lattice parameters by default
    cfg.drive.source = DriveConfig::Source::Preset;
    cfg.drive.preset = name;

    if (name == "square") {
        // four 15 T_B legs: +x, +y, -x, -y at unit envelope
        cfg.run.engine = "grid2d_separable";
        cfg.run.duration_tb = 60.0;
    } else if (name == "lissajous") {
        // alpha_x = cos(W t), alpha_y = cos(2 W t), W = omega_B/250
        cfg.run.engine = "grid2d_separable";
        cfg.run.duration_tb = 250.0;
        cfg.run.frame_stride_tb = 25.0;
    } else if (name == "beta_path") {
        // spine up, stop, then two bowls to the right; the stop at the top
        // is the drawn turning point
        cfg.drive.source = DriveConfig::Source::Path;
        cfg.drive.preset.clear();
        PathSpec p;
        PathSegment spine;
        spine.kind = PathSegment::Kind::Line;
        spine.x0 = 0; spine.y0 = -12; spine.x1 = 0; spine.y1 = 15;
        spine.duration_tb = 11;
        PathSegment stop;
        stop.kind = PathSegment::Kind::Dwell;
        stop.x0 = 0; stop.y0 = 15;
        stop.duration_tb = 1;
        PathSegment bowl1;
        bowl1.kind = PathSegment::Kind::Arc;
        bowl1.cx = 0; bowl1.cy = 9.5; bowl1.radius = 5.5;
        bowl1.start_deg = 90; bowl1.sweep_deg = -180;
        bowl1.duration_tb = 9;
        PathSegment bowl2;
        bowl2.kind = PathSegment::Kind::Arc;
        bowl2.cx = 0; bowl2.cy = -1.5; bowl2.radius = 5.5;
        bowl2.start_deg = 90; bowl2.sweep_deg = -180;
        bowl2.duration_tb = 9;
        p.segments = {spine, stop, bowl1, bowl2};
        cfg.drive.path = p;
        cfg.run.engine = "grid2d_separable";
        cfg.run.duration_tb = p.total_duration_tb();
    } else if (name == "concentration") {
        cfg.lattice.force_x = 0.25;
        cfg.lattice.force_y = 0.25;
        cfg.drive.profile = DriveWaveform::Profile::Beat;
        cfg.drive.profile_k = 0.02;
        cfg.initial.type = InitialConfig::Type::Packets;
        cfg.initial.width = 2.0;
        cfg.initial.packets = {{-10, 6}, {8, 9}, {12, -7}, {-7, -11}, {4, 2}};
        cfg.run.engine = "grid2d_separable";
        cfg.run.duration_tb = 70.0;
        cfg.run.frame_stride_tb = 5.0;
        cfg.run.dispersion_ref = "origin";
    } else if (name == "rotation") {
        cfg.drive.profile = DriveWaveform::Profile::Crossed;
        cfg.drive.profile_k = 0.05;
        cfg.initial.type = InitialConfig::Type::Cigar;
        cfg.initial.width_x = 3.0;
        cfg.initial.width_y = 1.3;
        cfg.run.engine = "grid2d_full";
        cfg.run.duration_tb = 20.0;
        cfg.grid.wells_x = 33;
        cfg.grid.wells_y = 33;
        cfg.run.frame_stride_tb = 2.0;
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    cfg.validate();
    return cfg;
}

MaterializedDrive materialize_drives(const ExperimentConfig& cfg,
                                     const WannierStarkBasis& basis_x,
                                     const WannierStarkBasis& basis_y,
                                     const Coherence& sigma) {
    MaterializedDrive out;
    const double wb_x = bloch_frequency(cfg.lattice, Axis::X);
    const double wb_y = bloch_frequency(cfg.lattice, Axis::Y);
    const double tb = 2.0 * M_PI / wb_x;
    const double dt_env = tb / 10.0;

    out.x.axis = Axis::X;
    out.y.axis = Axis::Y;
    out.x.carrier = wb_x;
    out.y.carrier = wb_y;
    out.x.beta = cfg.drive.beta_x;
    out.y.beta = cfg.drive.beta_y;
    out.x.profile = out.y.profile = cfg.drive.profile;
    out.x.profile_k = out.y.profile_k = cfg.drive.profile_k;
    out.x.literal_beat = out.y.literal_beat = cfg.drive.literal_beat;

    const double requested =
        cfg.run.duration_tb >= 0 ? cfg.run.duration_tb * tb : -1.0;

    switch (cfg.drive.source) {
        case DriveConfig::Source::Path: {
            auto [wx, wy] = compile_path(cfg.drive.path, basis_x, basis_y, sigma);
            // carry over the profile-free compiled envelopes; compile fixes
            // beta = 0 (zero-diffusion inversion)
            out.x.envelope = wx.envelope;
            out.y.envelope = wy.envelope;
            out.duration = cfg.drive.path.total_duration_tb() * tb;
            break;
        }
        case DriveConfig::Source::Waveform: {
            auto build = [&](const EnvelopeSpec& e, double wb) -> Envelope {
                switch (e.kind) {
                    case EnvelopeSpec::Kind::Zero:
                        return Envelope();
                    case EnvelopeSpec::Kind::Const:
                        return Envelope::constant(e.amp, 0.0, requested, dt_env);
                    case EnvelopeSpec::Kind::Cos:
                        return Envelope::cosine(e.amp, wb / e.omega_divisor, requested,
                                                dt_env);
                }
                return Envelope();
            };
            out.x.envelope = build(cfg.drive.envelope_x, wb_x);
            out.y.envelope = build(cfg.drive.envelope_y, wb_y);
            out.duration = requested;
            break;
        }
        case DriveConfig::Source::Preset: {
            const std::string& name = cfg.drive.preset;
            if (name == "square") {
                const double ramp = 2.0 * tb;
                Envelope ex = Envelope::pulse(1.0, 0.0, 15 * tb, ramp, dt_env);
                ex.add(Envelope::pulse(-1.0, 30 * tb, 45 * tb, ramp, dt_env));
                Envelope ey = Envelope::pulse(1.0, 15 * tb, 30 * tb, ramp, dt_env);
                ey.add(Envelope::pulse(-1.0, 45 * tb, 60 * tb, ramp, dt_env));
                out.x.envelope = std::move(ex);
                out.y.envelope = std::move(ey);
                out.duration = requested >= 0 ? requested : 60 * tb;
            } else if (name == "lissajous") {
                const double dur = requested >= 0 ? requested : 250 * tb;
                out.x.envelope = Envelope::cosine(1.0, wb_x / 250.0, dur, dt_env);
                out.y.envelope = Envelope::cosine(1.0, 2.0 * wb_x / 250.0, dur, dt_env);
                out.duration = dur;
            } else if (name == "concentration") {
                // the envelope sign is chosen so sin(ku) pushes every packet
                // toward the origin for the solved basis' sign of M_1 sigma
                const double g = basis_x.moment(1) * sigma.value.real();
                const double amp = g >= 0 ? -1.0 : 1.0;
                const double dur = requested >= 0 ? requested : 70 * tb;
                out.x.envelope = Envelope::constant(amp, 0.0, dur, dt_env);
                out.y.envelope = Envelope::constant(amp, 0.0, dur, dt_env);
                out.duration = dur;
            } else if (name == "rotation") {
                const double dur = requested >= 0 ? requested : 20 * tb;
                out.x.envelope = Envelope::constant(1.0, 0.0, dur, dt_env);
                out.y.envelope = Envelope::constant(1.0, 0.0, dur, dt_env);
                out.duration = dur;
            } else {
                throw std::invalid_argument("unknown preset '" + name + "'");
            }
            break;
        }
    }
    if (requested >= 0) out.duration = requested;
    return out;
}

}  // namespace stark
