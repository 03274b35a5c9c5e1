#include "saturn/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "saturn/errors.hpp"

namespace saturn {

namespace {

const std::set<std::string> top_level_keys = {"kernel",      "fstar",     "algorithms", "alphas",  "thetas",
                                              "c",           "n_grid",    "trials",     "noise_sigma",
                                              "base_seed",   "workers",   "eigensolver", "quadrature"};
const std::set<std::string> quadrature_keys = {"simpson_nodes", "mc_points"};

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string &field, const YAML::Node &node, const std::string &why) const {
        std::ostringstream os;
        os << source_;
        if (node.IsDefined() && node.Mark().line >= 0) os << ":" << node.Mark().line + 1;
        os << ": invalid field '" << field << "': " << why;
        throw Error(ErrorKind::configuration, os.str());
    }

    template <class T>
    T scalar(const YAML::Node &node, const std::string &field) const {
        if (!node.IsScalar()) fail(field, node, "expected a scalar");
        try {
            return node.as<T>();
        } catch (const YAML::Exception &) {
            fail(field, node, "cannot convert '" + node.Scalar() + "'");
        }
    }

    template <class T>
    std::vector<T> sequence(const YAML::Node &node, const std::string &field) const {
        if (!node.IsSequence()) fail(field, node, "expected a list");
        std::vector<T> out;
        for (const auto &item : node) out.push_back(scalar<T>(item, field));
        return out;
    }

    const std::string &source() const { return source_; }

private:
    std::string source_;
};

void apply_override(YAML::Node &root, const std::string &text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorKind::configuration, "override '" + text + "' is not of the form key=value");
    }
    const std::string key = text.substr(0, eq);
    YAML::Node value;
    try {
        value = YAML::Load(text.substr(eq + 1));
    } catch (const YAML::Exception &e) {
        throw Error(ErrorKind::configuration, "override '" + text + "': " + e.what());
    }
    std::vector<std::string> path;
    std::stringstream ss(key);
    for (std::string part; std::getline(ss, part, '.');) path.push_back(part);
    if (path.size() == 1) {
        root[path[0]] = value;
    } else if (path.size() == 2) {
        YAML::Node section = root[path[0]];
        if (!section.IsDefined() || section.IsNull()) {
            root[path[0]] = YAML::Node(YAML::NodeType::Map);
        }
        YAML::Node sec = root[path[0]];
        sec[path[1]] = value;
    } else {
        throw Error(ErrorKind::configuration, "override key '" + key + "' is nested too deeply");
    }
    if (key == "alphas") root.remove("thetas");
    if (key == "thetas") root.remove("alphas");
}

ExperimentConfig from_node(const YAML::Node &root, const Reader &r) {
    if (!root.IsMap()) r.fail("<root>", root, "expected a mapping of configuration keys");
    for (const auto &kv : root) {
        const std::string k = kv.first.as<std::string>();
        if (!top_level_keys.count(k)) r.fail(k, kv.first, "unknown key");
    }

    ExperimentConfig c;
    if (!root["kernel"]) r.fail("kernel", root, "missing");
    c.kernel = r.scalar<std::string>(root["kernel"], "kernel");
    if (!root["fstar"]) r.fail("fstar", root, "missing");
    c.fstar = r.scalar<std::string>(root["fstar"], "fstar");
    if (!root["algorithms"]) r.fail("algorithms", root, "missing");
    for (const auto &item : root["algorithms"]) {
        const auto id = r.scalar<std::string>(item, "algorithms");
        try {
            c.algorithms.push_back(parse_filter(id));
        } catch (const Error &e) {
            r.fail("algorithms", item, e.what());
        }
    }
    if (!root["algorithms"].IsSequence()) r.fail("algorithms", root["algorithms"], "expected a list");

    const bool has_alpha = static_cast<bool>(root["alphas"]);
    const bool has_theta = static_cast<bool>(root["thetas"]);
    if (has_alpha == has_theta) r.fail("alphas", root, "exactly one of 'alphas' or 'thetas' is required");
    c.schedule.kind = has_alpha ? ScheduleKind::alpha : ScheduleKind::theta;
    c.schedule.values = r.sequence<double>(has_alpha ? root["alphas"] : root["thetas"], has_alpha ? "alphas" : "thetas");
    if (root["c"]) c.schedule.c = r.scalar<double>(root["c"], "c");

    if (root["n_grid"]) c.n_grid = r.sequence<long>(root["n_grid"], "n_grid");
    if (root["trials"]) c.trials = r.scalar<int>(root["trials"], "trials");
    if (root["noise_sigma"]) c.noise_sigma = r.scalar<double>(root["noise_sigma"], "noise_sigma");
    if (root["base_seed"]) c.base_seed = r.scalar<std::uint64_t>(root["base_seed"], "base_seed");
    if (root["workers"]) c.workers = r.scalar<int>(root["workers"], "workers");
    if (root["eigensolver"]) {
        try {
            c.eigensolver = parse_eigen_solver(r.scalar<std::string>(root["eigensolver"], "eigensolver"));
        } catch (const Error &e) {
            r.fail("eigensolver", root["eigensolver"], e.what());
        }
    }
    if (const YAML::Node q = root["quadrature"]) {
        if (!q.IsMap()) r.fail("quadrature", q, "expected a mapping");
        for (const auto &kv : q) {
            const std::string k = kv.first.as<std::string>();
            if (!quadrature_keys.count(k)) r.fail("quadrature." + k, kv.first, "unknown key");
        }
        if (q["simpson_nodes"]) c.quadrature.simpson_nodes = r.scalar<int>(q["simpson_nodes"], "quadrature.simpson_nodes");
        if (q["mc_points"]) c.quadrature.mc_points = r.scalar<int>(q["mc_points"], "quadrature.mc_points");
    }

    try {
        c.validate();
    } catch (const Error &e) {
        throw Error(ErrorKind::configuration, r.source() + ": " + e.what());
    }
    return c;
}

std::string shortest(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, end};
}

template <class T, class F>
std::string list(const std::vector<T> &xs, F f) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + f(xs[i]);
    return s + "]";
}

}  // namespace

ExperimentConfig parse_config_text(const std::string &text, const std::vector<std::string> &overrides,
                                   const std::string &source) {
    const Reader r(source);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException &e) {
        throw Error(ErrorKind::configuration,
                    source + ":" + std::to_string(e.mark.line + 1) + ": parse error: " + e.msg);
    }
    if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    for (const auto &o : overrides) apply_override(root, o);
    return from_node(root, r);
}

ExperimentConfig parse_config(const std::string &path, const std::vector<std::string> &overrides) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::configuration, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), overrides, path);
}

std::string to_yaml(const ExperimentConfig &c) {
    std::ostringstream os;
    os << "kernel: " << c.kernel << "\n";
    os << "fstar: " << c.fstar << "\n";
    os << "algorithms: " << list(c.algorithms, [](FilterId f) { return std::string(to_string(f)); }) << "\n";
    os << (c.schedule.kind == ScheduleKind::alpha ? "alphas: " : "thetas: ") << list(c.schedule.values, shortest)
       << "\n";
    os << "c: " << shortest(c.schedule.c) << "\n";
    os << "n_grid: " << list(c.n_grid, [](long n) { return std::to_string(n); }) << "\n";
    os << "trials: " << c.trials << "\n";
    os << "noise_sigma: " << shortest(c.noise_sigma) << "\n";
    os << "base_seed: " << c.base_seed << "\n";
    os << "workers: " << c.workers << "\n";
    os << "eigensolver: " << to_string(c.eigensolver) << "\n";
    os << "quadrature:\n";
    os << "  simpson_nodes: " << c.quadrature.simpson_nodes << "\n";
    os << "  mc_points: " << c.quadrature.mc_points << "\n";
    return os.str();
}

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b) {
    return a.kernel == b.kernel && a.fstar == b.fstar && a.algorithms == b.algorithms &&
           a.schedule.kind == b.schedule.kind && a.schedule.values == b.schedule.values &&
           a.schedule.c == b.schedule.c && a.n_grid == b.n_grid && a.trials == b.trials &&
           a.noise_sigma == b.noise_sigma && a.base_seed == b.base_seed && a.workers == b.workers &&
           a.eigensolver == b.eigensolver && a.quadrature.simpson_nodes == b.quadrature.simpson_nodes &&
           a.quadrature.mc_points == b.quadrature.mc_points;
}

}  // namespace saturn
