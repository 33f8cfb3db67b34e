// SPDX-License-Identifier: Apache-2.0
#include "vitaliq/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vitaliq/errors.hpp"

namespace vitaliq {

namespace {

using Json = nlohmann::ordered_json;

std::string opt(const std::optional<double>& v, const char* missing) {
    return v ? format_number(*v) : std::string(missing);
}

Json opt_json(const std::optional<double>& v, const char* missing) {
    return v ? Json(*v) : Json(missing);
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n\r") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

Json summary_json(const std::optional<Summary>& s) {
    if (!s) {
        return "n/a";
    }
    return {{"mean", s->mean}, {"std", s->std}};
}

} // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name) noexcept {
    if (name == "csv") {
        return ReportFormat::csv;
    }
    if (name == "json") {
        return ReportFormat::json;
    }
    return std::nullopt;
}

std::string format_number(double value) {
    if (!std::isfinite(value)) {
        return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

std::string rows_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "algorithm,snr_db,window_length_s,e_i,e_q,abs_one_minus_e_i,abs_one_minus_e_q,rmse_mm,rr_error_bpm,"
           "seed,trial,error\n";
    for (const auto& r : report.rows) {
        out << csv_field(r.algorithm) << ',' << opt(r.snr_db, "none") << ',' << opt(r.window_length_s, "n/a") << ','
            << opt(r.e_i, "n/a") << ',' << opt(r.e_q, "n/a") << ',' << opt(r.abs_one_minus_e_i, "n/a") << ','
            << opt(r.abs_one_minus_e_q, "n/a") << ',' << opt(r.rmse_mm, "n/a") << ',' << opt(r.rr_error_bpm, "n/a")
            << ',' << r.seed << ',' << r.trial << ',' << csv_field(r.error) << '\n';
    }
    return out.str();
}

std::string aggregates_csv(const ExperimentReport& report) {
    std::ostringstream out;
    auto mean = [](const std::optional<Summary>& s) { return s ? format_number(s->mean) : std::string("n/a"); };
    auto sd = [](const std::optional<Summary>& s) { return s ? format_number(s->std) : std::string("n/a"); };
    if (report.sweep == SweepKind::window_lengths) {
        out << "algorithm,window_length_s,e_i_mean,e_i_std,e_q_mean,e_q_std,abs_one_minus_e_i_mean,"
               "abs_one_minus_e_q_mean,trials\n";
        for (const auto& a : report.aggregates) {
            out << csv_field(a.algorithm) << ',' << opt(a.window_length_s, "n/a") << ',' << mean(a.e_i) << ','
                << sd(a.e_i) << ',' << mean(a.e_q) << ',' << sd(a.e_q) << ',' << mean(a.abs_one_minus_e_i) << ','
                << mean(a.abs_one_minus_e_q) << ',' << a.trials << '\n';
        }
    } else {
        out << "algorithm,snr_db,rmse_mm_mean,rmse_mm_std,trials\n";
        for (const auto& a : report.aggregates) {
            out << csv_field(a.algorithm) << ',' << opt(a.snr_db, "none") << ',' << mean(a.rmse_mm) << ','
                << sd(a.rmse_mm) << ',' << a.trials << '\n';
        }
    }
    return out.str();
}

std::string report_json(const ExperimentReport& report) {
    Json rows = Json::array();
    for (const auto& r : report.rows) {
        rows.push_back({
            {"algorithm", r.algorithm},
            {"snr_db", opt_json(r.snr_db, "none")},
            {"window_length_s", opt_json(r.window_length_s, "n/a")},
            {"e_i", opt_json(r.e_i, "n/a")},
            {"e_q", opt_json(r.e_q, "n/a")},
            {"abs_one_minus_e_i", opt_json(r.abs_one_minus_e_i, "n/a")},
            {"abs_one_minus_e_q", opt_json(r.abs_one_minus_e_q, "n/a")},
            {"rmse_mm", opt_json(r.rmse_mm, "n/a")},
            {"rr_error_bpm", opt_json(r.rr_error_bpm, "n/a")},
            {"seed", r.seed},
            {"trial", r.trial},
            {"error", r.error.empty() ? Json(nullptr) : Json(r.error)},
        });
    }
    Json aggregates = Json::array();
    for (const auto& a : report.aggregates) {
        aggregates.push_back({
            {"algorithm", a.algorithm},
            {"snr_db", opt_json(a.snr_db, "none")},
            {"window_length_s", opt_json(a.window_length_s, "n/a")},
            {"trials", a.trials},
            {"failures", a.failures},
            {"e_i", summary_json(a.e_i)},
            {"e_q", summary_json(a.e_q)},
            {"abs_one_minus_e_i", summary_json(a.abs_one_minus_e_i)},
            {"abs_one_minus_e_q", summary_json(a.abs_one_minus_e_q)},
            {"rmse_mm", summary_json(a.rmse_mm)},
            {"rr_error_bpm", summary_json(a.rr_error_bpm)},
        });
    }
    Json root = {
        {"tool_version", report.tool_version},
        {"sweep", std::string(to_string(report.sweep))},
        {"degraded", report.degraded},
        {"notes", report.notes},
        {"config", report.config_echo.empty() ? Json(nullptr) : Json::parse(report.config_echo)},
        {"rows", rows},
        {"aggregates", aggregates},
    };
    return root.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& dir, ReportFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    if (format == ReportFormat::json) {
        write_text_file(dir / "report.json", report_json(report));
        return;
    }
    write_text_file(dir / "rows.csv", rows_csv(report));
    write_text_file(dir / "aggregates.csv", aggregates_csv(report));
    write_text_file(dir / "config_echo.json", report.config_echo);
    std::string notes;
    for (const auto& n : report.notes) {
        notes += n + '\n';
    }
    write_text_file(dir / "notes.txt", notes);
}

} // namespace vitaliq
