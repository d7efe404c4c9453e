#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "chiralkerr/constants.hpp"
#include "chiralkerr/errors.hpp"
#include "chiralkerr/experiment.hpp"
#include "defaults_json.hpp"

namespace chiralkerr {

namespace {

using json = nlohmann::json;

struct Leaf {
    json value;
    std::string source;
    std::string note;
};

using LeafMap = std::map<std::string, Leaf>;

void flatten(const json& node, const std::string& prefix, LeafMap& out) {
    for (auto it = node.begin(); it != node.end(); ++it) {
        const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
        const json& v = it.value();
        if (v.is_object() && v.contains("source"))
            out[path] = {v.at("value"), v.at("source").get<std::string>(), v.value("note", "")};
        else
            flatten(v, path, out);
    }
}

bool has_section(const LeafMap& leaves, const std::string& path) {
    auto it = leaves.lower_bound(path + ".");
    return it != leaves.end() && it->first.rfind(path + ".", 0) == 0;
}

void overlay(const json& user, const std::string& prefix, LeafMap& leaves) {
    if (!user.is_object())
        throw ValidationError((prefix.empty() ? std::string("config") : prefix) + " must be an object");
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
        auto leaf = leaves.find(path);
        if (leaf != leaves.end()) {
            const json& v = it.value();
            if (v.is_object() && v.contains("source") && v.contains("value")) {
                // Annotated leaf, as in the shipped defaults file.
                leaf->second.value = v.at("value");
                leaf->second.source = v.at("source").is_string() ? v.at("source").get<std::string>() : "config";
                leaf->second.note = v.value("note", leaf->second.note);
            } else {
                leaf->second.value = v;
                leaf->second.source = "config";
            }
        } else if (has_section(leaves, path)) {
            overlay(it.value(), path, leaves);
        } else {
            throw ValidationError("unknown key " + path);
        }
    }
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

class Reader {
public:
    explicit Reader(LeafMap leaves) : leaves_(std::move(leaves)) {}

    double number(const std::string& key, const char* unit = "") {
        const json& v = at(key);
        if (!v.is_number()) throw ValidationError(key + " must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ValidationError(key + " must be finite");
        record(key, fmt(x) + suffix(unit));
        return x;
    }

    // rad/s, either plain or as {"MHz_2pi": x}.
    double angular(const std::string& key) {
        const json& v = at(key);
        double x;
        if (v.is_number()) {
            x = v.get<double>();
        } else if (v.is_object() && v.size() == 1 && v.contains("MHz_2pi") && v.at("MHz_2pi").is_number()) {
            x = v.at("MHz_2pi").get<double>() * kMHz2pi;
        } else {
            throw ValidationError(key + " must be a number (rad/s) or {\"MHz_2pi\": x}");
        }
        if (!std::isfinite(x)) throw ValidationError(key + " must be finite");
        record(key, fmt(x) + " rad/s (2pi x " + fmt(x / kMHz2pi) + " MHz)");
        return x;
    }

    int integer(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number_integer()) throw ValidationError(key + " must be an integer");
        const long long x = v.get<long long>();
        if (x < -1000000000LL || x > 1000000000LL) throw ValidationError(key + " is out of range");
        record(key, std::to_string(x));
        return static_cast<int>(x);
    }

    std::string text(const std::string& key) {
        const json& v = at(key);
        if (!v.is_string()) throw ValidationError(key + " must be a string");
        record(key, v.get<std::string>());
        return v.get<std::string>();
    }

    bool is_text(const std::string& key) { return at(key).is_string(); }

    void record(const std::string& key, const std::string& value, const char* source = nullptr) {
        const Leaf& l = leaves_.at(key);
        out_.push_back({key, value, source ? source : l.source, l.note});
    }

    std::vector<ResolvedParameter> take() { return std::move(out_); }

private:
    const json& at(const std::string& key) const {
        auto it = leaves_.find(key);
        if (it == leaves_.end()) throw ValidationError("missing key " + key);
        return it->second.value;
    }
    static std::string suffix(const char* unit) { return *unit ? std::string(" ") + unit : std::string(); }

    LeafMap leaves_;
    std::vector<ResolvedParameter> out_;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

DriveSettings read_drive(Reader& r, const std::string& name, double probe_dipole) {
    const std::string p = "drives." + name + ".";
    DriveSettings d;
    d.power = r.number(p + "power", "W");
    d.detuning = r.angular(p + "detuning");
    d.beam_diameter = r.number(p + "beam_diameter", "m");
    d.wavelength = r.number(p + "wavelength", "m");
    d.dipole = probe_dipole > 0.0 ? probe_dipole : r.number(p + "dipole", "C m");
    d.rabi_scale = r.number(p + "rabi_scale");
    require(d.power >= 0.0, p + "power must be >= 0");
    require(d.beam_diameter > 0.0, p + "beam_diameter must be > 0");
    require(d.wavelength > 0.0, p + "wavelength must be > 0");
    require(d.dipole > 0.0, p + "dipole must be > 0");
    require(d.rabi_scale >= 0.0, p + "rabi_scale must be >= 0");
    return d;
}

SweepAxis parse_axis(const std::string& s) {
    if (s == "probe_detuning") return SweepAxis::ProbeDetuning;
    if (s == "switch_power") return SweepAxis::SwitchPower;
    if (s == "switch_detuning") return SweepAxis::SwitchDetuning;
    if (s == "phi_l2") return SweepAxis::PhiL2;
    throw ValidationError("sweep.axis must be one of probe_detuning, switch_power, switch_detuning, phi_l2; got " + s);
}

}  // namespace

double rb85_vapor_density(double temperature) {
    if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
    // log10 of pressure in torr; solid below the 312.46 K melting point.
    const double log_p = temperature < 312.46 ? 2.881 + 4.857 - 4215.0 / temperature
                                              : 2.881 + 4.312 - 4040.0 / temperature;
    const double pascal = std::pow(10.0, log_p) * 133.322368;
    return 0.7217 * pascal / (kConstants.kB * temperature);
}

const std::string& default_config_text() {
    static const std::string text(detail::kDefaultsJson);
    return text;
}

double DriveSettings::rabi() const { return rabi_scale * rabi_from_power(power, beam_diameter, dipole); }

double DriveSettings::wavevector() const { return kTwoPi / wavelength; }

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::ProbeDetuning: return "probe_detuning";
        case SweepAxis::SwitchPower: return "switch_power";
        case SweepAxis::SwitchDetuning: return "switch_detuning";
        case SweepAxis::PhiL2: return "phi_l2";
    }
    return "?";
}

std::vector<double> SweepSpec::grid() const {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = start + (stop - start) * i / (count - 1);
    g.back() = stop;
    return g;
}

void ExperimentConfig::validate() const {
    atom.validate();
    quadrature.validate();
    require(probe.rabi() > 0.0, "drives.probe.power and rabi_scale must give a nonzero probe Rabi frequency");
    require(geometry.cell_length > 0.0, "geometry.cell_length must be > 0");
    require(sweep.count >= 2, "sweep.count must be >= 2");
    require(sweep.stop > sweep.start, "sweep.stop must exceed sweep.start");
    require(calibration.phi_steps >= 1, "calibration.phi_steps must be >= 1");
    if (sweep.axis == SweepAxis::SwitchPower) require(sweep.start >= 0.0, "sweep.start must be >= 0 for switch_power");
}

DriveConfiguration ExperimentConfig::drives(Direction probe_direction) const {
    DriveConfiguration c;
    c.probe = {probe.rabi(), probe.detuning, probe.wavevector(), probe_direction};
    c.coupling = {coupling.rabi(), coupling.detuning, coupling.wavevector(), Direction::Forward};
    c.switching = {switching.rabi(), switching.detuning, switching.wavevector(), Direction::Forward};
    return c;
}

std::string ExperimentConfig::describe() const {
    std::ostringstream os;
    for (const auto& p : provenance) {
        os << p.key << " = " << p.value << "  [" << p.source << "]";
        if (!p.note.empty()) os << "  " << p.note;
        os << "\n";
    }
    auto line = [&os](const std::string& key, double w) {
        os << key << " = " << fmt(w) << " rad/s (2pi x " << fmt(w / kMHz2pi) << " MHz)  [derived]\n";
    };
    line("drives.probe.rabi", probe.rabi());
    line("drives.coupling.rabi", coupling.rabi());
    line("drives.switch.rabi", switching.rabi());
    const double u = VelocityDistribution::for_atom(atom).u;
    os << "atom.most_probable_speed = " << fmt(u) << " m/s  [derived]\n";
    line("atom.doppler_width_kp_u", probe.wavevector() * u);
    return os.str();
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    json user;
    try {
        user = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    LeafMap leaves;
    flatten(json::parse(default_config_text()), "", leaves);
    overlay(user, "", leaves);

    Reader r(std::move(leaves));
    ExperimentConfig c;
    AtomParams& a = c.atom;
    a.gamma21 = r.angular("atom.gamma21");
    a.gamma23 = r.angular("atom.gamma23");
    a.gamma41 = r.angular("atom.gamma41");
    a.gamma43 = r.angular("atom.gamma43");
    a.gamma31 = r.angular("atom.gamma31");
    a.gamma_transit = r.angular("atom.gamma_transit");
    a.mu23 = r.number("atom.mu23", "C m");
    a.mass = r.number("atom.mass", "kg");
    a.temperature = r.number("atom.temperature", "K");
    require(a.temperature > 0.0, "atom.temperature must be > 0");
    if (r.is_text("atom.density_n0")) {
        if (r.text("atom.density_n0") != "vapor-pressure")
            throw ValidationError("atom.density_n0 must be a number or \"vapor-pressure\"");
        a.density_n0 = rb85_vapor_density(a.temperature);
        r.record("atom.density_n0", fmt(a.density_n0) + " m^-3", "derived");
    } else {
        a.density_n0 = r.number("atom.density_n0", "m^-3");
    }
    a.validate();

    c.probe = read_drive(r, "probe", a.mu23);
    c.coupling = read_drive(r, "coupling", 0.0);
    c.switching = read_drive(r, "switch", 0.0);

    c.geometry.cell_length = r.number("geometry.cell_length", "m");
    c.geometry.bs_theta = r.number("geometry.bs_theta", "rad");
    c.geometry.bs_phi = r.number("geometry.bs_phi", "rad");
    c.geometry.phi_l2 = r.number("geometry.phi_l2", "rad");

    const std::string method = r.text("quadrature.method");
    if (method == "trapezoid")
        c.quadrature.method = QuadratureMethod::Trapezoid;
    else if (method == "gauss-hermite")
        c.quadrature.method = QuadratureMethod::GaussHermite;
    else
        throw ValidationError("quadrature.method must be trapezoid or gauss-hermite; got " + method);
    c.quadrature.node_count = r.integer("quadrature.node_count");
    c.quadrature.span = r.number("quadrature.span");

    c.sweep.axis = parse_axis(r.text("sweep.axis"));
    switch (c.sweep.axis) {
        case SweepAxis::ProbeDetuning:
        case SweepAxis::SwitchDetuning:
            c.sweep.start = r.angular("sweep.start");
            c.sweep.stop = r.angular("sweep.stop");
            break;
        case SweepAxis::SwitchPower:
            c.sweep.start = r.number("sweep.start", "W");
            c.sweep.stop = r.number("sweep.stop", "W");
            break;
        case SweepAxis::PhiL2:
            c.sweep.start = r.number("sweep.start", "rad");
            c.sweep.stop = r.number("sweep.stop", "rad");
            break;
    }
    c.sweep.count = r.integer("sweep.count");
    c.calibration.phi_steps = r.integer("calibration.phi_steps");

    c.provenance = r.take();
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": " + std::strerror(errno));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace chiralkerr
