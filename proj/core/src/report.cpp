#include "nirfuse/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "nirfuse/errors.hpp"

namespace nirfuse {

namespace {

const char* kExternalSlots[2] = {"schaul-ext", "farbman-ext"};

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Minimal CSV line splitter with double-quote escaping.
std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_number(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::strtod(s.c_str(), nullptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

void write_provenance(std::ofstream& out, const char* what, const Report& r) {
    out << "# nirfuse " << what << " v" << r.version << "\n";
    out << "# config_hash: " << r.config_hash << "\n";
    out << "# generated: " << r.timestamp << "\n";
}

} // namespace

void compute_aggregates(Report& report) {
    report.aggregates.clear();
    for (const std::string& method : report.method_order) {
        MethodAggregate agg;
        agg.method = method;
        double sum_rel = 0.0, sum_time = 0.0, sum_psnr = 0.0, sum_mse = 0.0;
        int ok = 0;
        for (const EvalRow& row : report.rows) {
            if (row.method != method) continue;
            ++agg.rows_total;
            if (!row.error.empty()) {
                ++agg.rows_failed;
                continue;
            }
            ++ok;
            sum_time += row.fuse_time_sec;
            sum_psnr += row.psnr_db;
            sum_mse += row.mse_value;
            if (row.rel_change) {
                ++agg.rel_defined;
                sum_rel += *row.rel_change;
            }
        }
        if (agg.rel_defined > 0) agg.mean_rel_change = sum_rel / agg.rel_defined;
        if (ok > 0) {
            agg.mean_time = sum_time / ok;
            agg.mean_psnr = sum_psnr / ok;
            agg.mean_mse = sum_mse / ok;
        }
        report.aggregates.push_back(agg);
    }
}

void write_per_image_csv(const std::filesystem::path& path, const Report& report) {
    std::ofstream out = open_out(path);
    write_provenance(out, "per-image results", report);
    out << "image_id,method";
    for (const std::string& t : report.transform_names) out << ",count_" << t;
    out << ",rel_change_pct,psnr_db,mse,clamped_pixels,error\n";
    for (const EvalRow& row : report.rows) {
        out << csv_escape(row.image_id) << "," << row.method;
        for (std::size_t i = 0; i < report.transform_names.size(); ++i) {
            out << ",";
            if (i < row.counts.size()) out << row.counts[i];
        }
        out << "," << (row.rel_change ? fmt(*row.rel_change) : std::string());
        out << "," << (row.error.empty() ? fmt(row.psnr_db) : std::string());
        out << "," << (row.error.empty() ? fmt(row.mse_value) : std::string());
        out << "," << row.clamped_pixels;
        out << "," << csv_escape(row.error) << "\n";
    }
}

void write_timing_csv(const std::filesystem::path& path, const Report& report) {
    std::ofstream out = open_out(path);
    write_provenance(out, "fuse timings (wall clock, not reproducible)", report);
    out << "image_id,method,fuse_time_sec\n";
    for (const EvalRow& row : report.rows) {
        out << csv_escape(row.image_id) << "," << row.method << "," << fmt(row.fuse_time_sec)
            << "\n";
    }
}

void write_summary_csv(const std::filesystem::path& path, const Report& report) {
    std::ofstream out = open_out(path);
    write_provenance(out, "summary", report);
    out << "metric";
    for (const MethodAggregate& a : report.aggregates) out << "," << a.method;
    for (const char* slot : kExternalSlots) out << "," << slot;
    out << "\n";

    auto row = [&](const char* name, auto value) {
        out << name;
        for (const MethodAggregate& a : report.aggregates) out << "," << value(a);
        for (std::size_t i = 0; i < 2; ++i) out << ",n/a";
        out << "\n";
    };
    row("rel_change_pct", [](const MethodAggregate& a) {
        return a.rel_defined > 0 ? fmt(a.mean_rel_change) : std::string("n/a");
    });
    row("time_sec", [](const MethodAggregate& a) { return fmt(a.mean_time); });
    row("psnr_db", [](const MethodAggregate& a) { return fmt(a.mean_psnr); });
    row("mse", [](const MethodAggregate& a) { return fmt(a.mean_mse); });
    row("rows_used", [](const MethodAggregate& a) { return std::to_string(a.rows_total - a.rows_failed); });
    row("rows_excluded", [](const MethodAggregate& a) { return std::to_string(a.rows_failed); });
}

std::string render_summary_text(const Report& report) {
    std::vector<std::string> headers = {"Metric (Average)"};
    for (const MethodAggregate& a : report.aggregates) headers.push_back(a.method);
    for (const char* slot : kExternalSlots) headers.push_back(slot);

    std::vector<std::vector<std::string>> table;
    auto add_row = [&](const std::string& name, auto value) {
        std::vector<std::string> r = {name};
        for (const MethodAggregate& a : report.aggregates) r.push_back(value(a));
        for (std::size_t i = 0; i < 2; ++i) r.push_back("n/a");
        table.push_back(std::move(r));
    };
    add_row("Rel. Change (%)", [](const MethodAggregate& a) {
        return a.rel_defined > 0 ? fmt_short(a.mean_rel_change) : std::string("n/a");
    });
    add_row("Time (Sec)", [](const MethodAggregate& a) { return fmt_short(a.mean_time); });
    add_row("PSNR", [](const MethodAggregate& a) { return fmt_short(a.mean_psnr); });
    add_row("MSE (1e-4)", [](const MethodAggregate& a) {
        return std::isinf(a.mean_mse) ? "inf" : fmt_short(a.mean_mse * 1e4);
    });
    add_row("Rows used", [](const MethodAggregate& a) { return std::to_string(a.rows_total - a.rows_failed); });
    add_row("Rows excluded", [](const MethodAggregate& a) { return std::to_string(a.rows_failed); });

    std::vector<std::size_t> widths(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        widths[c] = headers[c].size();
        for (const auto& r : table) widths[c] = std::max(widths[c], r[c].size());
    }

    std::ostringstream os;
    auto emit = [&](const std::vector<std::string>& r) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            os << (c ? "  " : "");
            os << r[c] << std::string(widths[c] - r[c].size(), ' ');
        }
        os << "\n";
    };
    emit(headers);
    std::vector<std::string> rule;
    for (std::size_t wdt : widths) rule.push_back(std::string(wdt, '-'));
    emit(rule);
    for (const auto& r : table) emit(r);
    os << "(config " << report.config_hash << "; external columns are paste-in slots)\n";
    return os.str();
}

Report read_per_image_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open report '" + path.string() + "'");

    Report report;
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.starts_with("#")) {
            const std::string hash_tag = "# config_hash: ";
            const std::string gen_tag = "# generated: ";
            if (line.starts_with(hash_tag)) report.config_hash = line.substr(hash_tag.size());
            if (line.starts_with(gen_tag)) report.timestamp = line.substr(gen_tag.size());
            continue;
        }
        if (header.empty()) {
            header = csv_split(line);
            const std::string prefix = "count_";
            for (const std::string& h : header) {
                if (h.starts_with(prefix)) report.transform_names.push_back(h.substr(prefix.size()));
            }
            if (header.size() != report.transform_names.size() + 7) {
                throw FormatError("unexpected per-image CSV header in '" + path.string() + "'");
            }
            continue;
        }
        const std::vector<std::string> f = csv_split(line);
        if (f.size() != header.size()) {
            throw FormatError("malformed CSV row in '" + path.string() + "': " + line);
        }
        EvalRow row;
        row.image_id = f[0];
        row.method = f[1];
        const std::size_t nt = report.transform_names.size();
        for (std::size_t i = 0; i < nt; ++i) {
            row.counts.push_back(f[2 + i].empty() ? 0 : std::strtol(f[2 + i].c_str(), nullptr, 10));
        }
        if (!f[2 + nt].empty()) row.rel_change = parse_number(f[2 + nt]);
        if (!f[3 + nt].empty()) row.psnr_db = parse_number(f[3 + nt]);
        if (!f[4 + nt].empty()) row.mse_value = parse_number(f[4 + nt]);
        row.clamped_pixels = std::strtol(f[5 + nt].c_str(), nullptr, 10);
        row.error = f[6 + nt];
        if (std::find(report.method_order.begin(), report.method_order.end(), row.method) ==
            report.method_order.end()) {
            report.method_order.push_back(row.method);
        }
        report.rows.push_back(std::move(row));
    }
    if (report.rows.empty()) {
        throw FormatError("'" + path.string() + "' contains no result rows");
    }
    compute_aggregates(report);
    return report;
}

int read_timing_csv(const std::filesystem::path& path, Report& report) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open timing file '" + path.string() + "'");
    std::map<std::pair<std::string, std::string>, double> times;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.starts_with("#")) continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const std::vector<std::string> f = csv_split(line);
        if (f.size() != 3) continue;
        times[{f[0], f[1]}] = parse_number(f[2]);
    }
    int updated = 0;
    for (EvalRow& row : report.rows) {
        const auto it = times.find({row.image_id, row.method});
        if (it != times.end()) {
            row.fuse_time_sec = it->second;
            ++updated;
        }
    }
    compute_aggregates(report);
    return updated;
}

} // namespace nirfuse
