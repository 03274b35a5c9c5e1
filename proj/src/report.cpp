#include "saturn/report.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "saturn/errors.hpp"

namespace saturn {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void io_fail(const fs::path &path, const std::string &what, int err) {
    throw Error(ErrorKind::io, what + " '" + path.string() + "': " + std::strerror(err));
}

void ensure_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create directory '" + dir.string() + "': " + ec.message());
}

void write_file(const fs::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) io_fail(path, "cannot open", errno);
    out << content;
    out.flush();
    if (!out) io_fail(path, "cannot write", errno);
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <class T>
T parse_field(const std::string &s, const fs::path &path, long line) {
    T v{};
    const char *b = s.data();
    const char *e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) {
        throw Error(ErrorKind::configuration,
                    path.string() + ":" + std::to_string(line) + ": cannot parse field '" + s + "'");
    }
    return v;
}

std::string key_prefix(const SweepResult &r, FilterId alg, double value) {
    return r.kernel + "," + r.fstar + "," + std::string(to_string(alg)) + "," + format6(value);
}

}  // namespace

std::string format6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string format_exact(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, end};
}

std::vector<fs::path> emit_sweep_csv(const SweepResult &result, const fs::path &dir) {
    ensure_dir(dir);
    std::ostringstream trials;
    trials << "kernel,fstar,algorithm,schedule,n,trial,lambda,l2_error\n";
    for (const auto &t : result.trials) {
        trials << key_prefix(result, t.algorithm, t.schedule_value) << "," << t.n << "," << t.trial << ","
               << format_exact(t.lambda) << "," << format_exact(t.l2_error) << "\n";
    }
    std::ostringstream summary;
    summary << "kernel,fstar,algorithm,schedule,n,mean_error,std_error\n";
    for (const auto &c : result.cells) {
        summary << key_prefix(result, c.algorithm, c.schedule_value) << "," << c.n << "," << format6(c.mean_error)
                << "," << format6(c.std_error) << "\n";
    }
    const fs::path tp = dir / "trials.csv";
    const fs::path sp = dir / "summary.csv";
    write_file(tp, trials.str());
    write_file(sp, summary.str());
    return {tp, sp};
}

std::string format_rate_table(const SweepResult &result) {
    std::vector<FilterId> algs;
    std::vector<double> values;
    for (const auto &r : result.rates) {
        if (std::find(algs.begin(), algs.end(), r.algorithm) == algs.end()) algs.push_back(r.algorithm);
        if (std::find(values.begin(), values.end(), r.schedule_value) == values.end()) values.push_back(r.schedule_value);
    }
    std::sort(values.begin(), values.end());

    std::map<FilterId, double> best;
    for (const auto &r : result.rates) {
        auto it = best.find(r.algorithm);
        if (it == best.end() || r.fit.rate > it->second) best[r.algorithm] = r.fit.rate;
    }

    char buf[64];
    std::ostringstream os;
    os << "kernel " << result.kernel << ", f* " << result.fstar << "\n";
    std::snprintf(buf, sizeof buf, "%-8s", std::string(to_string(result.schedule_kind)).c_str());
    os << buf;
    for (FilterId a : algs) {
        std::snprintf(buf, sizeof buf, " %10s", std::string(to_string(a)).c_str());
        os << buf;
    }
    os << "\n";
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%-8s", format6(v).c_str());
        os << buf;
        for (FilterId a : algs) {
            const RateRow *row = result.rate(a, v);
            std::string cell = "-";
            if (row) {
                std::snprintf(buf, sizeof buf, "%.3f", row->fit.rate);
                cell = buf;
                if (row->fit.rate == best[a]) cell += "*";
                else cell += " ";
            }
            std::snprintf(buf, sizeof buf, " %10s", cell.c_str());
            os << buf;
        }
        os << "\n";
    }
    return os.str();
}

std::vector<fs::path> emit_rate_table(const SweepResult &result, const fs::path &dir) {
    ensure_dir(dir);
    std::ostringstream csv;
    csv << "kernel,fstar,algorithm,schedule,rate,stderr\n";
    for (const auto &r : result.rates) {
        csv << key_prefix(result, r.algorithm, r.schedule_value) << "," << format6(r.fit.rate) << ","
            << format6(r.fit.stderr_slope) << "\n";
    }
    const fs::path cp = dir / "rates.csv";
    const fs::path tp = dir / "rates.txt";
    write_file(cp, csv.str());
    write_file(tp, format_rate_table(result));
    return {cp, tp};
}

std::vector<fs::path> emit_loglog_plot_data(const SweepResult &result, const fs::path &dir) {
    ensure_dir(dir);
    std::vector<fs::path> out;
    std::size_t i = 0;
    while (i < result.cells.size()) {
        const FilterId alg = result.cells[i].algorithm;
        const double value = result.cells[i].schedule_value;
        const RateRow *rate = result.rate(alg, value);
        std::ostringstream os;
        os << "n,mean_error,mean_minus_sd,mean_plus_sd,fit_value\n";
        for (; i < result.cells.size() && result.cells[i].algorithm == alg && result.cells[i].schedule_value == value;
             ++i) {
            const auto &c = result.cells[i];
            os << c.n << "," << format6(c.mean_error) << "," << format6(c.mean_error - c.std_error) << ","
               << format6(c.mean_error + c.std_error) << ","
               << (rate ? format6(rate->fit.predict(static_cast<double>(c.n))) : std::string("nan")) << "\n";
        }
        const fs::path p = dir / ("plot_" + std::string(to_string(alg)) + "_" +
                                  std::string(to_string(result.schedule_kind)) + "_" + format6(value) + ".csv");
        write_file(p, os.str());
        out.push_back(p);
    }
    return out;
}

TrialsFile read_trials_csv(const fs::path &path) {
    std::ifstream in(path);
    if (!in) io_fail(path, "cannot open", errno);
    std::string line;
    if (!std::getline(in, line) || line != "kernel,fstar,algorithm,schedule,n,trial,lambda,l2_error") {
        throw Error(ErrorKind::configuration, path.string() + ":1: not a trials.csv header");
    }
    TrialsFile out;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 8) {
            throw Error(ErrorKind::configuration, path.string() + ":" + std::to_string(lineno) + ": expected 8 fields");
        }
        if (out.trials.empty()) {
            out.kernel = f[0];
            out.fstar = f[1];
        }
        TrialResult t;
        try {
            t.algorithm = parse_filter(f[2]);
        } catch (const Error &e) {
            throw Error(ErrorKind::configuration, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        t.schedule_value = parse_field<double>(f[3], path, lineno);
        t.n = parse_field<long>(f[4], path, lineno);
        t.trial = parse_field<int>(f[5], path, lineno);
        t.lambda = parse_field<double>(f[6], path, lineno);
        t.l2_error = parse_field<double>(f[7], path, lineno);
        out.trials.push_back(t);
    }
    if (in.bad()) io_fail(path, "cannot read", errno);
    return out;
}

void write_bias_variance_csv(std::ostream &os, const std::vector<BiasVarReport> &rows) {
    os << "lambda,n,bias_sq,variance,total\n";
    for (const auto &r : rows) {
        os << format6(r.lambda) << "," << r.n << "," << format6(r.bias_sq) << "," << format6(r.variance) << ","
           << format6(r.total) << "\n";
    }
}

}  // namespace saturn
