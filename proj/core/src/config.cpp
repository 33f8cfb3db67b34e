// SPDX-License-Identifier: Apache-2.0
#include "vitaliq/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vitaliq/errors.hpp"

namespace vitaliq {

namespace {

using Json = nlohmann::ordered_json;

// Reads keys from one JSON object and remembers which were consumed so that
// leftovers can be reported as unknown.
class ObjectReader {
public:
    ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            fail("expected an object");
        }
    }

    const Json* find(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const Json* v = find(key)) {
            if (!v->is_number()) {
                fail(key + ": expected a number");
            }
            out = v->get<double>();
        }
    }

    void optional_number(const std::string& key, std::optional<double>& out) {
        if (const Json* v = find(key)) {
            if (v->is_null()) {
                out.reset();
            } else if (v->is_number()) {
                out = v->get<double>();
            } else {
                fail(key + ": expected a number or null");
            }
        }
    }

    template <typename Int>
    void integer(const std::string& key, Int& out) {
        if (const Json* v = find(key)) {
            if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
                fail(key + ": expected a non-negative integer");
            }
            out = static_cast<Int>(v->get<std::uint64_t>());
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const Json* v = find(key)) {
            if (!v->is_boolean()) {
                fail(key + ": expected true or false");
            }
            out = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const Json* v = find(key)) {
            if (!v->is_string()) {
                fail(key + ": expected a string");
            }
            out = v->get<std::string>();
        }
    }

    std::string type_tag() {
        const Json* v = find("type");
        if (v == nullptr || !v->is_string()) {
            fail("type: expected a string");
        }
        return v->get<std::string>();
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) {
                fail("unknown key '" + it.key() + "'");
            }
        }
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("config " + (path_.empty() ? std::string("root") : path_) + ": " + what, 0);
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

DcProfile read_dc(const Json& j, const std::string& path) {
    ObjectReader r(j, path);
    const auto type = r.type_tag();
    DcProfile out;
    if (type == "constant") {
        ConstantDc p;
        r.number("value", p.value);
        out = p;
    } else if (type == "piecewise_random") {
        PiecewiseRandomDc p;
        r.number("lo", p.lo);
        r.number("hi", p.hi);
        r.number("segment_s", p.segment_s);
        out = p;
    } else if (type == "linear_ramp") {
        LinearRampDc p;
        r.number("start", p.start);
        r.number("end", p.end);
        out = p;
    } else {
        r.fail("type: unknown DC profile '" + type + "'");
    }
    r.finish();
    return out;
}

AmplitudeProfile read_amplitude(const Json& j, const std::string& path) {
    if (j.is_number()) {
        return ConstantAmplitude{j.get<double>()};
    }
    ObjectReader r(j, path);
    const auto type = r.type_tag();
    AmplitudeProfile out;
    if (type == "constant") {
        ConstantAmplitude p;
        r.number("value", p.value);
        out = p;
    } else if (type == "slow_sine") {
        SlowSineAmplitude p;
        r.number("mean", p.mean);
        r.number("depth", p.depth);
        r.number("freq_hz", p.freq_hz);
        out = p;
    } else {
        r.fail("type: unknown amplitude profile '" + type + "'");
    }
    r.finish();
    return out;
}

MotionProfile read_motion(const Json& j, const std::string& path) {
    ObjectReader r(j, path);
    const auto type = r.type_tag();
    MotionProfile out;
    if (type == "none") {
        out = NoMotion{};
    } else if (type == "slow_sine") {
        SlowSineMotion p;
        r.number("amp_m", p.amp_m);
        r.number("freq_hz", p.freq_hz);
        out = p;
    } else if (type == "bounded_walk") {
        BoundedWalkMotion p;
        r.number("step_m", p.step_m);
        r.number("clamp_m", p.clamp_m);
        out = p;
    } else {
        r.fail("type: unknown motion profile '" + type + "'");
    }
    r.finish();
    return out;
}

VitalSignScenario read_scenario(const Json& j, const std::string& path) {
    VitalSignScenario s;
    ObjectReader r(j, path);
    r.number("duration_s", s.duration_s);
    r.number("sample_rate_hz", s.sample_rate_hz);
    r.number("wavelength_m", s.wavelength_m);
    r.number("d0_m", s.d0_m);
    r.number("resp_freq_hz", s.resp_freq_hz);
    r.number("heart_freq_hz", s.heart_freq_hz);
    r.number("resp_amp_m", s.resp_amp_m);
    r.number("heart_amp_m", s.heart_amp_m);
    r.number("phi_i_rad", s.phi_i_rad);
    r.number("phi_q_rad", s.phi_q_rad);
    if (const Json* v = r.find("amp_i")) {
        s.amp_i = read_amplitude(*v, join(path, "amp_i"));
    }
    if (const Json* v = r.find("amp_q")) {
        s.amp_q = read_amplitude(*v, join(path, "amp_q"));
    }
    if (const Json* v = r.find("dc_i")) {
        s.dc_i = read_dc(*v, join(path, "dc_i"));
    }
    if (const Json* v = r.find("dc_q")) {
        s.dc_q = read_dc(*v, join(path, "dc_q"));
    }
    if (const Json* v = r.find("body_motion")) {
        s.body_motion = read_motion(*v, join(path, "body_motion"));
    }
    r.optional_number("snr_db", s.snr_db);
    r.integer("seed", s.seed);
    r.finish();
    return s;
}

std::vector<double> read_number_list(const Json& j, const std::string& path) {
    if (!j.is_array()) {
        throw ParseError("config " + path + ": expected a list of numbers", 0);
    }
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) {
            throw ParseError("config " + path + ": expected a list of numbers", 0);
        }
        out.push_back(v.get<double>());
    }
    return out;
}

Sweep read_sweep(const Json& j) {
    if (j.is_null() || (j.is_string() && j.get<std::string>() == "none")) {
        return {};
    }
    ObjectReader r(j, "sweep");
    Sweep s;
    const Json* w = r.find("window_lengths");
    const Json* snr = r.find("snr_values_db");
    if (w != nullptr && snr != nullptr) {
        r.fail("give either window_lengths or snr_values_db, not both");
    }
    if (w != nullptr) {
        s.kind = SweepKind::window_lengths;
        s.values = read_number_list(*w, "sweep.window_lengths");
    } else if (snr != nullptr) {
        s.kind = SweepKind::snr_values_db;
        s.values = read_number_list(*snr, "sweep.snr_values_db");
    }
    r.finish();
    return s;
}

CalibrationConfig read_calibration(const Json& j) {
    CalibrationConfig c;
    ObjectReader r(j, "calibration");
    std::string method = std::string(to_string(c.method));
    r.string("method", method);
    if (method == "peak_valley") {
        c.method = CalibrationMethod::peak_valley;
    } else if (method == "circle_fit") {
        c.method = CalibrationMethod::circle_fit;
    } else if (method == "none") {
        c.method = CalibrationMethod::none;
    } else {
        r.fail("method: expected peak_valley, circle_fit or none");
    }
    r.number("window_s", c.window_s);
    r.number("hop_s", c.hop_s);
    r.optional_number("prominence", c.prominence);
    std::string smoothing = "auto";
    r.string("smoothing", smoothing);
    if (smoothing == "auto") {
        c.smoothing = Smoothing::automatic;
    } else if (smoothing == "on") {
        c.smoothing = Smoothing::on;
    } else if (smoothing == "off") {
        c.smoothing = Smoothing::off;
    } else {
        r.fail("smoothing: expected auto, on or off");
    }
    r.integer("smooth_length", c.smooth_length);
    r.number("swing_reject_fraction", c.swing_reject_fraction);
    std::string expansion = "linear";
    r.string("expansion", expansion);
    if (expansion == "linear") {
        c.expansion = DcExpansion::linear;
    } else if (expansion == "piecewise_constant") {
        c.expansion = DcExpansion::piecewise_constant;
    } else {
        r.fail("expansion: expected linear or piecewise_constant");
    }
    r.finish();
    return c;
}

DemodOptions read_demod(const Json& j) {
    DemodOptions d;
    ObjectReader r(j, "demod");
    std::string derivative = "spectral";
    r.string("derivative", derivative);
    if (derivative == "spectral") {
        d.derivative = DerivativeScheme::spectral;
    } else if (derivative == "central_difference") {
        d.derivative = DerivativeScheme::central_difference;
    } else {
        r.fail("derivative: expected spectral or central_difference");
    }
    r.number("edge_trim_s", d.edge_trim_s);
    std::string denominator = "weighted_median";
    r.string("denominator", denominator);
    if (denominator == "weighted_median") {
        d.denominator = DenominatorMode::weighted_median;
    } else if (denominator == "pointwise") {
        d.denominator = DenominatorMode::pointwise;
    } else {
        r.fail("denominator: expected weighted_median or pointwise");
    }
    r.number("denominator_window_s", d.denominator_window_s);
    r.finish();
    return d;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

Json dc_json(const DcProfile& p) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantDc>) {
                return {{"type", "constant"}, {"value", v.value}};
            } else if constexpr (std::is_same_v<T, PiecewiseRandomDc>) {
                return {{"type", "piecewise_random"}, {"lo", v.lo}, {"hi", v.hi}, {"segment_s", v.segment_s}};
            } else {
                return {{"type", "linear_ramp"}, {"start", v.start}, {"end", v.end}};
            }
        },
        p);
}

Json amplitude_json(const AmplitudeProfile& p) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantAmplitude>) {
                return {{"type", "constant"}, {"value", v.value}};
            } else {
                return {{"type", "slow_sine"}, {"mean", v.mean}, {"depth", v.depth}, {"freq_hz", v.freq_hz}};
            }
        },
        p);
}

Json motion_json(const MotionProfile& p) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, NoMotion>) {
                return {{"type", "none"}};
            } else if constexpr (std::is_same_v<T, SlowSineMotion>) {
                return {{"type", "slow_sine"}, {"amp_m", v.amp_m}, {"freq_hz", v.freq_hz}};
            } else {
                return {{"type", "bounded_walk"}, {"step_m", v.step_m}, {"clamp_m", v.clamp_m}};
            }
        },
        p);
}

} // namespace

void ExperimentConfig::validate() const {
    scenario.validate();
    if (trials < 1) {
        throw DomainError("trials must be >= 1");
    }
    if (sweep.kind != SweepKind::none && sweep.values.empty()) {
        throw DomainError("sweep list must not be empty");
    }
    if (sweep.kind == SweepKind::window_lengths) {
        for (double w : sweep.values) {
            if (!(w > 0.0)) {
                throw DomainError("sweep window lengths must be > 0");
            }
        }
    }
    if (algorithms.empty()) {
        throw DomainError("algorithms must not be empty");
    }
    if (!(calibration.window_s > 0.0)) {
        throw DomainError("calibration.window_s must be > 0");
    }
    if (calibration.prominence && !(*calibration.prominence > 0.0)) {
        throw DomainError("calibration.prominence must be > 0");
    }
    if (calibration.smooth_length < 1) {
        throw DomainError("calibration.smooth_length must be >= 1");
    }
    if (demod.edge_trim_s < 0.0) {
        throw DomainError("demod.edge_trim_s must be >= 0");
    }
    if (!(rate_band.low_hz > 0.0) || !(rate_band.high_hz > rate_band.low_hz)) {
        throw DomainError("rate_band must satisfy 0 < low_hz < high_hz");
    }
}

ExperimentConfig parse_config(std::string_view text) {
    Json root;
    try {
        root = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what(), line_of(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    ExperimentConfig c;
    ObjectReader r(root, "");
    if (const Json* v = r.find("scenario")) {
        c.scenario = read_scenario(*v, "scenario");
    }
    if (const Json* v = r.find("sweep")) {
        c.sweep = read_sweep(*v);
    }
    r.integer("trials", c.trials);
    if (const Json* v = r.find("algorithms")) {
        if (!v->is_array()) {
            r.fail("algorithms: expected a list");
        }
        c.algorithms.clear();
        for (const auto& a : *v) {
            const auto parsed = a.is_string() ? parse_algorithm(a.get<std::string>()) : std::nullopt;
            if (!parsed) {
                r.fail("algorithms: expected names from atan, mdacm, acaa, hadcm");
            }
            c.algorithms.push_back(*parsed);
        }
    }
    if (const Json* v = r.find("calibration")) {
        c.calibration = read_calibration(*v);
    }
    if (const Json* v = r.find("demod")) {
        c.demod = read_demod(*v);
    }
    if (const Json* v = r.find("rate_band")) {
        ObjectReader band(*v, "rate_band");
        band.number("low_hz", c.rate_band.low_hz);
        band.number("high_hz", c.rate_band.high_hz);
        band.finish();
    }
    r.boolean("atan_raw_input", c.atan_raw_input);
    r.boolean("acaa_raw_input", c.acaa_raw_input);
    r.string("output_dir", c.output_dir);
    r.integer("base_seed", c.base_seed);
    r.integer("threads", c.threads);
    r.finish();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open config file " + path.string(), 0);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
    const auto& s = c.scenario;
    Json scenario = {
        {"duration_s", s.duration_s},
        {"sample_rate_hz", s.sample_rate_hz},
        {"wavelength_m", s.wavelength_m},
        {"d0_m", s.d0_m},
        {"resp_freq_hz", s.resp_freq_hz},
        {"heart_freq_hz", s.heart_freq_hz},
        {"resp_amp_m", s.resp_amp_m},
        {"heart_amp_m", s.heart_amp_m},
        {"phi_i_rad", s.phi_i_rad},
        {"phi_q_rad", s.phi_q_rad},
        {"amp_i", amplitude_json(s.amp_i)},
        {"amp_q", amplitude_json(s.amp_q)},
        {"dc_i", dc_json(s.dc_i)},
        {"dc_q", dc_json(s.dc_q)},
        {"body_motion", motion_json(s.body_motion)},
        {"snr_db", s.snr_db ? Json(*s.snr_db) : Json(nullptr)},
        {"seed", s.seed},
    };
    Json sweep = "none";
    if (c.sweep.kind != SweepKind::none) {
        sweep = Json::object();
        sweep[std::string(to_string(c.sweep.kind))] = c.sweep.values;
    }
    Json algorithms = Json::array();
    for (auto a : c.algorithms) {
        algorithms.push_back(std::string(to_string(a)));
    }
    const auto& cal = c.calibration;
    const char* smoothing = cal.smoothing == Smoothing::automatic ? "auto" : cal.smoothing == Smoothing::on ? "on" : "off";
    Json calibration = {
        {"method", std::string(to_string(cal.method))},
        {"window_s", cal.window_s},
        {"hop_s", cal.hop_s},
        {"prominence", cal.prominence ? Json(*cal.prominence) : Json(nullptr)},
        {"smoothing", smoothing},
        {"smooth_length", cal.smooth_length},
        {"swing_reject_fraction", cal.swing_reject_fraction},
        {"expansion", cal.expansion == DcExpansion::linear ? "linear" : "piecewise_constant"},
    };
    Json demod = {
        {"derivative", c.demod.derivative == DerivativeScheme::spectral ? "spectral" : "central_difference"},
        {"edge_trim_s", c.demod.edge_trim_s},
        {"denominator", c.demod.denominator == DenominatorMode::weighted_median ? "weighted_median" : "pointwise"},
        {"denominator_window_s", c.demod.denominator_window_s},
    };
    Json root = {
        {"scenario", scenario},
        {"sweep", sweep},
        {"trials", c.trials},
        {"algorithms", algorithms},
        {"calibration", calibration},
        {"demod", demod},
        {"rate_band", {{"low_hz", c.rate_band.low_hz}, {"high_hz", c.rate_band.high_hz}}},
        {"atan_raw_input", c.atan_raw_input},
        {"acaa_raw_input", c.acaa_raw_input},
        {"output_dir", c.output_dir},
        {"base_seed", c.base_seed},
        {"threads", c.threads},
    };
    return root.dump(2) + "\n";
}

std::string_view to_string(SweepKind kind) noexcept {
    switch (kind) {
    case SweepKind::none:
        return "none";
    case SweepKind::window_lengths:
        return "window_lengths";
    case SweepKind::snr_values_db:
        return "snr_values_db";
    }
    return "none";
}

std::string_view to_string(CalibrationMethod method) noexcept {
    switch (method) {
    case CalibrationMethod::peak_valley:
        return "peak_valley";
    case CalibrationMethod::circle_fit:
        return "circle_fit";
    case CalibrationMethod::none:
        return "none";
    }
    return "none";
}

PeakValleyOptions peak_valley_options(const CalibrationConfig& config, std::optional<double> snr_db) {
    PeakValleyOptions o;
    o.window = WindowSpec{config.window_s, config.hop_s};
    o.min_prominence = config.prominence;
    o.smooth = config.smoothing == Smoothing::on ||
               (config.smoothing == Smoothing::automatic && snr_db && *snr_db < 20.0);
    o.smooth_length = config.smooth_length;
    o.swing_reject_fraction = config.swing_reject_fraction;
    o.expansion = config.expansion;
    return o;
}

DcEstimate estimate_dc(const IqSeries& iq, const CalibrationConfig& config, std::optional<double> snr_db) {
    switch (config.method) {
    case CalibrationMethod::peak_valley:
        return peak_valley_dc(iq, peak_valley_options(config, snr_db));
    case CalibrationMethod::circle_fit:
        return circle_fit_windowed_dc(iq, WindowSpec{config.window_s, config.hop_s}, config.expansion);
    case CalibrationMethod::none:
        break;
    }
    return {constant_dc(0.0, iq.size(), iq.sample_rate_hz()), constant_dc(0.0, iq.size(), iq.sample_rate_hz())};
}

} // namespace vitaliq
