#include "stark/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace stark {

const std::vector<std::string>& known_presets() {
    static const std::vector<std::string> names{"square", "lissajous", "beta_path",
                                                "concentration", "rotation"};
    return names;
}

const std::vector<std::string>& known_engines() {
    static const std::vector<std::string> names{"rwa", "bessel", "grid1d",
                                                "grid2d_separable", "grid2d_full"};
    return names;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(line, "expected a number, got '" + v + "'");
    return d;
}

int parse_int(const std::string& v, int line) {
    char* end = nullptr;
    long d = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(line, "expected an integer, got '" + v + "'");
    return static_cast<int>(d);
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(line, "expected true/false, got '" + v + "'");
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

PathSegment parse_segment(const std::string& v, int line) {
    auto tok = split_ws(v);
    PathSegment seg;
    if (tok.empty()) throw ConfigError(line, "empty path segment");
    auto need = [&](size_t n) {
        if (tok.size() != n)
            throw ConfigError(line, "segment '" + tok[0] + "' takes " +
                                        std::to_string(n - 1) + " numbers");
    };
    if (tok[0] == "line") {
        need(6);
        seg.kind = PathSegment::Kind::Line;
        seg.x0 = parse_double(tok[1], line);
        seg.y0 = parse_double(tok[2], line);
        seg.x1 = parse_double(tok[3], line);
        seg.y1 = parse_double(tok[4], line);
        seg.duration_tb = parse_double(tok[5], line);
    } else if (tok[0] == "arc") {
        need(7);
        seg.kind = PathSegment::Kind::Arc;
        seg.cx = parse_double(tok[1], line);
        seg.cy = parse_double(tok[2], line);
        seg.radius = parse_double(tok[3], line);
        seg.start_deg = parse_double(tok[4], line);
        seg.sweep_deg = parse_double(tok[5], line);
        seg.duration_tb = parse_double(tok[6], line);
    } else if (tok[0] == "dwell") {
        need(2);
        seg.kind = PathSegment::Kind::Dwell;
        seg.duration_tb = parse_double(tok[1], line);
    } else {
        throw ConfigError(line, "unknown segment kind '" + tok[0] + "'");
    }
    return seg;
}

EnvelopeSpec parse_envelope(const std::string& v, int line) {
    auto tok = split_ws(v);
    EnvelopeSpec e;
    if (tok.empty()) throw ConfigError(line, "empty envelope spec");
    if (tok[0] == "none") {
        if (tok.size() != 1) throw ConfigError(line, "'none' takes no arguments");
        e.kind = EnvelopeSpec::Kind::Zero;
    } else if (tok[0] == "const") {
        if (tok.size() != 2) throw ConfigError(line, "'const' takes one amplitude");
        e.kind = EnvelopeSpec::Kind::Const;
        e.amp = parse_double(tok[1], line);
    } else if (tok[0] == "cos") {
        if (tok.size() != 3)
            throw ConfigError(line, "'cos' takes amplitude and omega divisor");
        e.kind = EnvelopeSpec::Kind::Cos;
        e.amp = parse_double(tok[1], line);
        e.omega_divisor = parse_double(tok[2], line);
        if (e.omega_divisor <= 0) throw ConfigError(line, "omega divisor must be positive");
    } else {
        throw ConfigError(line, "unknown envelope kind '" + tok[0] + "'");
    }
    return e;
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    bool saw_source = false;
    std::string section;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    std::vector<std::string> seen;  // "section.key" duplicates guard

    while (std::getline(is, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            static const std::vector<std::string> sections{"lattice", "grid", "initial",
                                                           "drive", "path", "run"};
            if (std::find(sections.begin(), sections.end(), section) == sections.end())
                throw ConfigError(line, "unknown section [" + section + "]");
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError(line, "empty key");
        if (section.empty()) throw ConfigError(line, "key outside any [section]");

        bool repeatable = (section == "path" && key == "segment") ||
                          (section == "initial" && key == "packet");
        std::string id = section + "." + key;
        if (!repeatable) {
            if (std::find(seen.begin(), seen.end(), id) != seen.end())
                throw ConfigError(line, "duplicate key '" + key + "'");
            seen.push_back(id);
        }

        if (section == "lattice") {
            if (key == "depth_x") cfg.lattice.depth_x = parse_double(val, line);
            else if (key == "depth_y") cfg.lattice.depth_y = parse_double(val, line);
            else if (key == "force_x") cfg.lattice.force_x = parse_double(val, line);
            else if (key == "force_y") cfg.lattice.force_y = parse_double(val, line);
            else if (key == "beat_k") cfg.lattice.beat_k = parse_double(val, line);
            else throw ConfigError(line, "unknown key '" + key + "' in [lattice]");
        } else if (section == "grid") {
            if (key == "points_per_period") cfg.grid.points_per_period = parse_int(val, line);
            else if (key == "wells_x") cfg.grid.wells_x = val == "auto" ? 0 : parse_int(val, line);
            else if (key == "wells_y") cfg.grid.wells_y = val == "auto" ? 0 : parse_int(val, line);
            else if (key == "origin_x") cfg.grid.origin_x = val == "auto" ? -1 : parse_int(val, line);
            else if (key == "origin_y") cfg.grid.origin_y = val == "auto" ? -1 : parse_int(val, line);
            else throw ConfigError(line, "unknown key '" + key + "' in [grid]");
        } else if (section == "initial") {
            if (key == "type") {
                if (val == "gaussian") cfg.initial.type = InitialConfig::Type::Gaussian;
                else if (val == "cigar") cfg.initial.type = InitialConfig::Type::Cigar;
                else if (val == "packets") cfg.initial.type = InitialConfig::Type::Packets;
                else throw ConfigError(line, "unknown initial type '" + val + "'");
            } else if (key == "width") cfg.initial.width = parse_double(val, line);
            else if (key == "width_x") cfg.initial.width_x = parse_double(val, line);
            else if (key == "width_y") cfg.initial.width_y = parse_double(val, line);
            else if (key == "center_x") cfg.initial.center_x = parse_double(val, line);
            else if (key == "center_y") cfg.initial.center_y = parse_double(val, line);
            else if (key == "packet") {
                auto tok = split_ws(val);
                if (tok.size() != 2) throw ConfigError(line, "packet takes 'x y'");
                cfg.initial.packets.push_back(
                    {parse_double(tok[0], line), parse_double(tok[1], line)});
            } else throw ConfigError(line, "unknown key '" + key + "' in [initial]");
        } else if (section == "drive") {
            if (key == "source") {
                saw_source = true;
                if (val == "preset") cfg.drive.source = DriveConfig::Source::Preset;
                else if (val == "path") cfg.drive.source = DriveConfig::Source::Path;
                else if (val == "waveform") cfg.drive.source = DriveConfig::Source::Waveform;
                else throw ConfigError(line, "unknown drive source '" + val + "'");
            } else if (key == "preset") cfg.drive.preset = val;
            else if (key == "envelope_x") cfg.drive.envelope_x = parse_envelope(val, line);
            else if (key == "envelope_y") cfg.drive.envelope_y = parse_envelope(val, line);
            else if (key == "beta_x") cfg.drive.beta_x = parse_double(val, line);
            else if (key == "beta_y") cfg.drive.beta_y = parse_double(val, line);
            else if (key == "profile") {
                auto tok = split_ws(val);
                if (tok[0] == "none" && tok.size() == 1)
                    cfg.drive.profile = DriveWaveform::Profile::None;
                else if (tok[0] == "beat" && tok.size() == 2) {
                    cfg.drive.profile = DriveWaveform::Profile::Beat;
                    cfg.drive.profile_k = parse_double(tok[1], line);
                } else if (tok[0] == "crossed" && tok.size() == 2) {
                    cfg.drive.profile = DriveWaveform::Profile::Crossed;
                    cfg.drive.profile_k = parse_double(tok[1], line);
                } else throw ConfigError(line, "profile is 'none', 'beat k' or 'crossed k'");
            } else if (key == "literal_beat") cfg.drive.literal_beat = parse_bool(val, line);
            else throw ConfigError(line, "unknown key '" + key + "' in [drive]");
        } else if (section == "path") {
            if (key == "segment") cfg.drive.path.segments.push_back(parse_segment(val, line));
            else throw ConfigError(line, "unknown key '" + key + "' in [path]");
        } else if (section == "run") {
            if (key == "engine") cfg.run.engine = val;
            else if (key == "duration_tb") cfg.run.duration_tb = parse_double(val, line);
            else if (key == "dt_fraction") cfg.run.dt_fraction = parse_int(val, line);
            else if (key == "samples_per_tb") cfg.run.samples_per_tb = parse_int(val, line);
            else if (key == "frame_stride_tb") cfg.run.frame_stride_tb = parse_double(val, line);
            else if (key == "dispersion_ref") cfg.run.dispersion_ref = val;
            else throw ConfigError(line, "unknown key '" + key + "' in [run]");
        }
    }
    if (!saw_source && !cfg.drive.path.segments.empty())
        cfg.drive.source = DriveConfig::Source::Path;
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    lattice.validate(Axis::X);
    lattice.validate(Axis::Y);

    const auto& engines = known_engines();
    if (std::find(engines.begin(), engines.end(), run.engine) == engines.end())
        throw std::invalid_argument("unknown engine '" + run.engine + "'");

    const bool coeff_engine = run.engine == "rwa" || run.engine == "bessel";

    switch (drive.source) {
        case DriveConfig::Source::Preset: {
            const auto& names = known_presets();
            if (std::find(names.begin(), names.end(), drive.preset) == names.end())
                throw std::invalid_argument("unknown preset '" + drive.preset + "'");
            if (!drive.path.segments.empty())
                throw std::invalid_argument("preset drive cannot also carry a [path]");
            break;
        }
        case DriveConfig::Source::Path:
            if (!drive.preset.empty())
                throw std::invalid_argument("path drive cannot also name a preset");
            drive.path.validate();
            if (run.duration_tb >= 0 &&
                std::abs(run.duration_tb - drive.path.total_duration_tb()) > 1e-9)
                throw std::invalid_argument("run duration differs from the path duration");
            break;
        case DriveConfig::Source::Waveform:
            if (!drive.preset.empty() || !drive.path.segments.empty())
                throw std::invalid_argument("waveform drive excludes preset and path");
            if (run.duration_tb < 0)
                throw std::invalid_argument("waveform drive needs an explicit duration_tb");
            break;
    }

    if (drive.profile == DriveWaveform::Profile::Crossed && run.engine != "grid2d_full")
        throw std::invalid_argument("crossed drive requires engine grid2d_full");
    if (coeff_engine && drive.profile != DriveWaveform::Profile::None)
        throw std::invalid_argument("coefficient engines take uniform drives only");
    if (coeff_engine && initial.type == InitialConfig::Type::Packets)
        throw std::invalid_argument("multi-packet initial states need a grid engine");
    if (initial.type == InitialConfig::Type::Packets && initial.packets.empty())
        throw std::invalid_argument("packets initial state lists no packets");

    if (run.dt_fraction < (coeff_engine ? 200 : 500))
        throw std::invalid_argument("dt_fraction too small for the engine");
    if (run.samples_per_tb < 1 || run.dt_fraction % run.samples_per_tb != 0)
        throw std::invalid_argument("samples_per_tb must divide dt_fraction");
    if (run.frame_stride_tb < 0)
        throw std::invalid_argument("frame_stride_tb must be >= 0");
    if (run.dispersion_ref != "centroid" && run.dispersion_ref != "origin")
        throw std::invalid_argument("dispersion_ref is 'centroid' or 'origin'");
    if (grid.points_per_period < 16 || grid.points_per_period % 2)
        throw std::invalid_argument("points_per_period must be even and >= 16");
    for (int w : {grid.wells_x, grid.wells_y})
        if (w > 0 && (w % 2 == 0 || w < 3))
            throw std::invalid_argument("explicit wells count must be odd and >= 3");
}

std::string ExperimentConfig::serialize() const {
    std::ostringstream os;
    os << "[lattice]\n";
    os << "depth_x = " << fmt_num(lattice.depth_x) << "\n";
    os << "depth_y = " << fmt_num(lattice.depth_y) << "\n";
    os << "force_x = " << fmt_num(lattice.force_x) << "\n";
    os << "force_y = " << fmt_num(lattice.force_y) << "\n";
    if (lattice.beat_k != 0.0) os << "beat_k = " << fmt_num(lattice.beat_k) << "\n";

    os << "\n[grid]\n";
    os << "points_per_period = " << grid.points_per_period << "\n";
    os << "wells_x = " << (grid.wells_x > 0 ? std::to_string(grid.wells_x) : "auto") << "\n";
    os << "wells_y = " << (grid.wells_y > 0 ? std::to_string(grid.wells_y) : "auto") << "\n";
    if (grid.origin_x >= 0) os << "origin_x = " << grid.origin_x << "\n";
    if (grid.origin_y >= 0) os << "origin_y = " << grid.origin_y << "\n";

    os << "\n[initial]\n";
    switch (initial.type) {
        case InitialConfig::Type::Gaussian:
            os << "type = gaussian\n";
            os << "width = " << fmt_num(initial.width) << "\n";
            os << "center_x = " << fmt_num(initial.center_x) << "\n";
            os << "center_y = " << fmt_num(initial.center_y) << "\n";
            break;
        case InitialConfig::Type::Cigar:
            os << "type = cigar\n";
            os << "width_x = " << fmt_num(initial.width_x) << "\n";
            os << "width_y = " << fmt_num(initial.width_y) << "\n";
            os << "center_x = " << fmt_num(initial.center_x) << "\n";
            os << "center_y = " << fmt_num(initial.center_y) << "\n";
            break;
        case InitialConfig::Type::Packets:
            os << "type = packets\n";
            os << "width = " << fmt_num(initial.width) << "\n";
            for (const auto& p : initial.packets)
                os << "packet = " << fmt_num(p[0]) << " " << fmt_num(p[1]) << "\n";
            break;
    }

    os << "\n[drive]\n";
    switch (drive.source) {
        case DriveConfig::Source::Preset:
            os << "source = preset\npreset = " << drive.preset << "\n";
            break;
        case DriveConfig::Source::Path:
            os << "source = path\n";
            break;
        case DriveConfig::Source::Waveform: {
            os << "source = waveform\n";
            auto env = [&](const EnvelopeSpec& e) -> std::string {
                switch (e.kind) {
                    case EnvelopeSpec::Kind::Zero: return "none";
                    case EnvelopeSpec::Kind::Const: return "const " + fmt_num(e.amp);
                    case EnvelopeSpec::Kind::Cos:
                        return "cos " + fmt_num(e.amp) + " " + fmt_num(e.omega_divisor);
                }
                return "none";
            };
            os << "envelope_x = " << env(drive.envelope_x) << "\n";
            os << "envelope_y = " << env(drive.envelope_y) << "\n";
            break;
        }
    }
    if (drive.beta_x != 0.0) os << "beta_x = " << fmt_num(drive.beta_x) << "\n";
    if (drive.beta_y != 0.0) os << "beta_y = " << fmt_num(drive.beta_y) << "\n";
    switch (drive.profile) {
        case DriveWaveform::Profile::None: break;
        case DriveWaveform::Profile::Beat:
            os << "profile = beat " << fmt_num(drive.profile_k) << "\n";
            break;
        case DriveWaveform::Profile::Crossed:
            os << "profile = crossed " << fmt_num(drive.profile_k) << "\n";
            break;
    }
    if (drive.literal_beat) os << "literal_beat = true\n";

    if (drive.source == DriveConfig::Source::Path) {
        os << "\n[path]\n";
        for (const auto& s : drive.path.segments) {
            switch (s.kind) {
                case PathSegment::Kind::Line:
                    os << "segment = line " << fmt_num(s.x0) << " " << fmt_num(s.y0) << " "
                       << fmt_num(s.x1) << " " << fmt_num(s.y1) << " "
                       << fmt_num(s.duration_tb) << "\n";
                    break;
                case PathSegment::Kind::Arc:
                    os << "segment = arc " << fmt_num(s.cx) << " " << fmt_num(s.cy) << " "
                       << fmt_num(s.radius) << " " << fmt_num(s.start_deg) << " "
                       << fmt_num(s.sweep_deg) << " " << fmt_num(s.duration_tb) << "\n";
                    break;
                case PathSegment::Kind::Dwell:
                    os << "segment = dwell " << fmt_num(s.duration_tb) << "\n";
                    break;
            }
        }
    }

    os << "\n[run]\n";
    os << "engine = " << run.engine << "\n";
    if (run.duration_tb >= 0) os << "duration_tb = " << fmt_num(run.duration_tb) << "\n";
    os << "dt_fraction = " << run.dt_fraction << "\n";
    os << "samples_per_tb = " << run.samples_per_tb << "\n";
    os << "frame_stride_tb = " << fmt_num(run.frame_stride_tb) << "\n";
    if (run.dispersion_ref != "centroid")
        os << "dispersion_ref = " << run.dispersion_ref << "\n";
    return os.str();
}

}  // namespace stark
