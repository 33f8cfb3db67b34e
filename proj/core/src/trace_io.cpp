// SPDX-License-Identifier: Apache-2.0
#include "vitaliq/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "vitaliq/calibration.hpp"
#include "vitaliq/errors.hpp"
#include "vitaliq/version.hpp"

namespace vitaliq {

namespace {

using Json = nlohmann::ordered_json;

double parse_field(std::string_view field, std::size_t line, const char* name) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, last, value);
    if (field.empty() || res.ec != std::errc() || res.ptr != last) {
        throw ParseError("column " + std::string(name) + ": '" + std::string(field) + "' is not a number", line);
    }
    if (!std::isfinite(value)) {
        throw ParseError("column " + std::string(name) + ": value must be finite", line);
    }
    return value;
}

} // namespace

IqSeries parse_trace(std::string_view text) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }
    std::vector<double> t;
    std::vector<double> i;
    std::vector<double> q;
    std::vector<std::size_t> lines;
    std::size_t line = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view row = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line;
        if (!row.empty() && row.back() == '\r') {
            throw ParseError("CR line endings are not accepted; use LF", line);
        }
        if (!header_seen) {
            if (row != "t_s,i,q") {
                throw ParseError("expected header 't_s,i,q'", line);
            }
            header_seen = true;
            continue;
        }
        if (row.empty()) {
            if (pos >= text.size()) {
                break;
            }
            throw ParseError("empty line", line);
        }
        std::string_view fields[3];
        std::size_t count = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = row.find(',', start);
            if (count < 3) {
                fields[count] = row.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            }
            ++count;
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (count != 3) {
            throw ParseError("expected 3 columns, found " + std::to_string(count), line);
        }
        t.push_back(parse_field(fields[0], line, "t_s"));
        i.push_back(parse_field(fields[1], line, "i"));
        q.push_back(parse_field(fields[2], line, "q"));
        lines.push_back(line);
        if (t.size() > 1 && !(t.back() > t[t.size() - 2])) {
            throw ParseError("time must be strictly increasing", line);
        }
    }
    if (!header_seen) {
        throw ParseError("empty file; expected header 't_s,i,q'", 1);
    }
    if (t.size() < 4) {
        throw ParseError("trace needs at least 4 samples, found " + std::to_string(t.size()), line);
    }

    std::vector<double> dt(t.size() - 1);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        dt[k] = t[k + 1] - t[k];
    }
    std::vector<double> sorted = dt;
    const std::size_t mid = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
    double median = sorted[mid];
    if (sorted.size() % 2 == 0) {
        median = 0.5 * (median + *std::max_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    for (std::size_t k = 0; k < dt.size(); ++k) {
        if (std::abs(dt[k] - median) > 0.01 * median) {
            throw ParseError("sample interval deviates more than 1% from the median " + std::to_string(median) + " s",
                             lines[k + 1]);
        }
    }
    return IqSeries(std::move(i), std::move(q), 1.0 / median);
}

IqSeries read_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open trace file " + path.string(), 0);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace(buf.str());
}

std::string format_trace(const IqSeries& iq) {
    std::string out = "t_s,i,q\n";
    out.reserve(out.size() + iq.size() * 48);
    for (std::size_t n = 0; n < iq.size(); ++n) {
        out += format_number(static_cast<double>(n) / iq.sample_rate_hz());
        out += ',';
        out += format_number(iq.i()[n]);
        out += ',';
        out += format_number(iq.q()[n]);
        out += '\n';
    }
    return out;
}

void write_trace(const std::filesystem::path& path, const IqSeries& iq) { write_text_file(path, format_trace(iq)); }

PipelineResult run_pipeline(const IqSeries& iq, const PipelineOptions& options) {
    auto calibrated = calibrate(iq, estimate_dc(iq, options.calibration, options.snr_db));
    auto phase = demodulate(options.algorithm, calibrated, options.wavelength_m, options.demod);
    auto spec = spectrum(phase);
    PipelineResult result{std::move(calibrated), std::move(phase), std::move(spec), std::nullopt, {}};
    try {
        result.rate_bpm = estimate_rate_bpm(result.phase, options.band);
    } catch (const DomainError& e) {
        result.rate_error = e.what();
    }
    return result;
}

PipelineResult demodulate_trace(const std::filesystem::path& input, const PipelineOptions& options) {
    return run_pipeline(read_trace(input), options);
}

void write_pipeline_outputs(const PipelineResult& result, const PipelineOptions& options,
                            const std::filesystem::path& dir, ReportFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    const auto& p = result.phase;
    Json summary = {
        {"tool_version", std::string("vitaliq ") + kVersion},
        {"algorithm", std::string(to_string(options.algorithm))},
        {"calibration", std::string(to_string(options.calibration.method))},
        {"wavelength_m", options.wavelength_m},
        {"sample_rate_hz", p.sample_rate_hz},
        {"num_samples", p.size()},
        {"valid_begin", p.valid.begin},
        {"valid_end", p.valid.end},
        {"rate_band_hz", {options.band.low_hz, options.band.high_hz}},
        {"rate_bpm", result.rate_bpm ? Json(*result.rate_bpm) : Json("n/a")},
    };
    if (!result.rate_error.empty()) {
        summary["rate_error"] = result.rate_error;
    }

    if (format == ReportFormat::json) {
        Json phase = Json::array();
        for (std::size_t n = 0; n < p.size(); ++n) {
            phase.push_back({static_cast<double>(n) / p.sample_rate_hz, p.phase_rad[n],
                             p.has_displacement() ? Json(p.displacement_m[n]) : Json(nullptr)});
        }
        summary["phase_columns"] = {"t_s", "phase_rad", "displacement_m"};
        summary["phase"] = phase;
        summary["spectrum"] = {{"resolution_hz", result.spectrum.resolution_hz},
                               {"freq_hz", result.spectrum.freq_hz},
                               {"amplitude_norm", result.spectrum.amplitude_norm}};
        write_text_file(dir / "demod.json", summary.dump(2) + "\n");
        return;
    }

    std::string phase_csv = "t_s,phase_rad,displacement_m,valid\n";
    for (std::size_t n = 0; n < p.size(); ++n) {
        phase_csv += format_number(static_cast<double>(n) / p.sample_rate_hz) + ',' + format_number(p.phase_rad[n]) +
                     ',' + (p.has_displacement() ? format_number(p.displacement_m[n]) : std::string("n/a")) + ',' +
                     (p.valid.contains(n) ? "1" : "0") + '\n';
    }
    std::string spectrum_csv = "freq_hz,amplitude_norm\n";
    for (std::size_t k = 0; k < result.spectrum.freq_hz.size(); ++k) {
        spectrum_csv += format_number(result.spectrum.freq_hz[k]) + ',' +
                        format_number(result.spectrum.amplitude_norm[k]) + '\n';
    }
    write_text_file(dir / "phase.csv", phase_csv);
    write_text_file(dir / "spectrum.csv", spectrum_csv);
    write_text_file(dir / "summary.json", summary.dump(2) + "\n");
}

} // namespace vitaliq
