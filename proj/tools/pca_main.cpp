// pca: simulation, perfect sampling, and spectral/entropy analysis of noisy
// cellular automata.  One output directory per run, named by a content hash
// of the effective config; identical config+seed gives byte-identical
// artifacts.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pca/fourier.hpp"
#include "pca/invariant.hpp"
#include "pca/io.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace pca;

namespace {

struct Config {
    std::map<std::string, std::string> kv;
    std::string text;  // canonical echo used for hashing

    bool has(const std::string& k) const { return kv.count(k) > 0; }
    std::string str(const std::string& k, const std::string& dflt = "") const {
        auto it = kv.find(k);
        if (it == kv.end()) {
            if (dflt.empty()) throw std::runtime_error("missing config key: " + k);
            return dflt;
        }
        return it->second;
    }
    double num(const std::string& k, const std::string& dflt = "") const {
        return std::stod(str(k, dflt));
    }
    std::int64_t integer(const std::string& k, const std::string& dflt = "") const {
        return std::stoll(str(k, dflt));
    }
    std::vector<double> nums(const std::string& k) const {
        std::istringstream is(str(k));
        std::vector<double> v;
        double x;
        while (is >> x) v.push_back(x);
        return v;
    }
    std::vector<std::int64_t> ints(const std::string& k) const {
        std::istringstream is(str(k));
        std::vector<std::int64_t> v;
        std::int64_t x;
        while (is >> x) v.push_back(x);
        return v;
    }
};

const std::set<std::string> kKnownKeys{
    "rule",    "noise",   "epsilon", "q",       "sigma",  "beta",
    "delta",   "matrix",  "seed",    "geometry", "horizon", "window",
    "replicas", "samples", "trials",  "pattern", "n",      "budget",
    "basis",   "index",   "p",       "init",    "t_cap",  "steps"};

Config parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    Config cfg;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::istringstream probe(line);
            std::string tok;
            if (probe >> tok)
                throw std::runtime_error("malformed config line: " + line);
            continue;
        }
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (!kKnownKeys.count(key))
            throw std::runtime_error("unknown config key: " + key);
        if (cfg.kv.count(key)) throw std::runtime_error("duplicate key: " + key);
        cfg.kv[key] = val;
    }
    return cfg;
}

std::string canonical_text(const Config& cfg) {
    std::string out;
    for (const auto& [k, v] : cfg.kv) out += k + " = " + v + "\n";
    return out;
}

std::string content_hash(const std::string& text) {
    // FNV-1a, 64-bit
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

LocalRule load_rule(const Config& cfg) {
    std::string spec = cfg.str("rule");
    if (spec.rfind("zoo:", 0) == 0) return build_zoo(spec.substr(4));
    if (spec.rfind("file:", 0) == 0) {
        std::ifstream in(spec.substr(5));
        if (!in) throw std::runtime_error("cannot open rule file: " + spec.substr(5));
        return read_rule_text(in);
    }
    throw std::runtime_error("rule must be zoo:NAME or file:PATH, got: " + spec);
}

NoiseKernel load_noise(const Config& cfg, const Alphabet& a) {
    std::string kind = cfg.str("noise");
    if (kind == "memoryless") {
        if (cfg.has("q"))
            return NoiseKernel::memoryless(a.size, cfg.num("epsilon"), cfg.nums("q"));
        return NoiseKernel::memoryless_uniform(a.size, cfg.num("epsilon"));
    }
    if (kind == "additive") return NoiseKernel::additive(a, cfg.nums("q"));
    if (kind == "flip") {
        double e = cfg.num("epsilon");
        return NoiseKernel::additive(Alphabet::binary(), {1 - e, e});
    }
    if (kind == "permutation") {
        std::vector<int> sigma;
        for (std::int64_t s : cfg.ints("sigma")) sigma.push_back(static_cast<int>(s));
        return NoiseKernel::permutation(a.size, sigma, cfg.num("epsilon"),
                                        cfg.nums("q"));
    }
    if (kind == "birth_death")
        return NoiseKernel::birth_death(cfg.nums("beta"), cfg.nums("delta"));
    if (kind == "zero_range")
        return NoiseKernel::explicit_matrix(a.size, cfg.nums("matrix"));
    if (kind == "none") return NoiseKernel::memoryless_uniform(a.size, 0.0);
    throw std::runtime_error("unknown noise kind: " + kind);
}

Geometry load_geometry(const Config& cfg) {
    std::vector<std::int64_t> sides = cfg.ints("geometry");
    if (sides.empty()) throw std::runtime_error("geometry needs side lengths");
    Geometry g;
    g.torus = true;
    g.sides = sides;
    g.boundary_symbol = -1;
    return g;
}

Configuration initial_config(const Config& cfg, const Alphabet& a,
                             const Geometry& g, std::uint64_t seed) {
    std::string init = cfg.str("init", "0");
    if (init == "random") {
        Configuration x = Configuration::constant(a, g, 0);
        RandomField f = RandomField(seed).derive(0xC0FFEE);
        Coord site(g.dim(), 0);
        for (std::size_t i = 0; i < x.cells.size(); ++i) {
            std::size_t rem = i;
            for (int k = g.dim() - 1; k >= 0; --k) {
                site[k] = static_cast<std::int64_t>(rem % g.sides[k]);
                rem /= g.sides[k];
            }
            x.cells[i] = static_cast<std::uint8_t>(
                f.uniform(0, site, 0) * a.size);
        }
        return x;
    }
    return Configuration::constant(a, g, std::stoi(init));
}

json curve_json(const DecayCurve& c) {
    return json{{"label", c.label}, {"points", c.times.size()}};
}

struct Run {
    Config cfg;
    fs::path dir;
    std::uint64_t seed = 0;
    json manifest;

    void finish(const std::string& subcommand) {
        manifest["subcommand"] = subcommand;
        manifest["seed"] = seed;
        manifest["config"] = cfg.kv;
        manifest["config_hash"] = content_hash(cfg.text);
        manifest["version"] = "pcanoise 0.1.0";
        std::ofstream out(dir / "manifest.json");
        out << manifest.dump(2) << "\n";
    }
};

int cmd_simulate(Run& run) {
    LocalRule f = load_rule(run.cfg);
    NoiseKernel noise = load_noise(run.cfg, f.alphabet);
    PcaRule phi = compose_pca(f, noise);
    Geometry g = load_geometry(run.cfg);
    std::int64_t steps = run.cfg.integer("steps", "100");
    Configuration x = initial_config(run.cfg, f.alphabet, g, run.seed);
    UpdateFunction u = build_update_function(phi);
    RandomField field(run.seed);
    std::vector<Configuration> frames{x};
    for (std::int64_t t = 0; t < steps; ++t) {
        x = step(phi, u, x, field, t);
        frames.push_back(x);
    }
    if (g.dim() == 1)
        write_space_time_pgm((run.dir / "space_time.pgm").string(), frames);
    write_pgm((run.dir / "final.pgm").string(), x);
    std::ofstream out(run.dir / "final.txt");
    write_configuration_text(out, x);
    run.manifest["artifacts"] = {"space_time.pgm", "final.pgm", "final.txt"};
    run.manifest["steps"] = steps;
    return 0;
}

int cmd_sample(Run& run) {
    LocalRule f = load_rule(run.cfg);
    NoiseKernel noise = load_noise(run.cfg, f.alphabet);
    PcaRule phi = compose_pca(f, noise);
    SiteSet window = SiteSet::line(run.cfg.ints("window"));
    std::int64_t nsamples = run.cfg.integer("samples", "100");
    std::int64_t t_cap = run.cfg.integer("t_cap", "1048576");
    RandomField field(run.seed);
    std::ofstream out(run.dir / "samples.jsonl");
    for (std::int64_t s = 0; s < nsamples; ++s) {
        CftpResult r;
        try {
            r = cftp_sample(phi, window, field.derive(static_cast<std::uint64_t>(s)),
                            t_cap);
        } catch (const std::exception&) {
            json err{{"error", "no coalescence"}, {"t_cap", t_cap}, {"seed", s}};
            std::printf("%s\n", err.dump().c_str());
            return 1;
        }
        json line{{"seed", s},
                  {"window", run.cfg.str("window")},
                  {"pattern", r.pattern},
                  {"T", r.horizon}};
        out << line.dump() << "\n";
    }
    run.manifest["artifacts"] = {"samples.jsonl"};
    run.manifest["samples"] = nsamples;
    return 0;
}

int cmd_diagnose(Run& run) {
    LocalRule f = load_rule(run.cfg);
    NoiseKernel noise = load_noise(run.cfg, f.alphabet);
    PcaRule phi = compose_pca(f, noise);
    Geometry g = load_geometry(run.cfg);
    SiteSet window = SiteSet::line(run.cfg.ints("window"));
    std::int64_t horizon = run.cfg.integer("horizon", "100");
    std::size_t replicas =
        static_cast<std::size_t>(run.cfg.integer("replicas", "1000"));
    std::vector<Configuration> inits;
    for (int s = 0; s < f.alphabet.size; ++s)
        inits.push_back(Configuration::constant(f.alphabet, g, s));
    RandomField field(run.seed);
    DecayCurve tv = tv_decay(phi, window, inits, horizon, replicas, field);
    write_curve_csv((run.dir / "tv_decay.csv").string(), tv);
    DecayCurve cp = coupling_decay(phi, window, horizon,
                                   std::max<std::size_t>(replicas / 10, 10),
                                   field.derive(1));
    write_curve_csv((run.dir / "coupling_decay.csv").string(), cp);
    run.manifest["artifacts"] = {"tv_decay.csv", "coupling_decay.csv"};
    run.manifest["curves"] = {curve_json(tv), curve_json(cp)};
    return 0;
}

int cmd_spectral(Run& run) {
    LocalRule f = load_rule(run.cfg);
    NoiseKernel noise = load_noise(run.cfg, f.alphabet);
    PcaRule phi = compose_pca(f, noise);
    std::vector<Coord> A;
    for (std::int64_t k : run.cfg.ints("index")) A.push_back({k});
    std::int64_t horizon = run.cfg.integer("horizon", "10");
    json report;
    std::ofstream csv(run.dir / "spectral.csv");
    csv << "basis,t,seminorm\n";
    for (auto basis : {CharacterObservable::Basis::fourier,
                       CharacterObservable::Basis::moebius}) {
        const char* name =
            basis == CharacterObservable::Basis::fourier ? "fourier" : "moebius";
        double rho = contraction_coefficient(phi, basis);
        json entry{{"rho", rho}, {"contracting", rho < 1.0}};
        try {
            CharacterObservable h;
            h.basis = basis;
            h.dim = 1;
            h.coeffs[A] = 1.0;
            for (std::int64_t t = 1; t <= horizon; ++t) {
                h = pca_on_observable(phi, h);
                csv << name << "," << t << "," << seminorm(h) << "\n";
            }
            entry["final_seminorm"] = seminorm(h);
        } catch (const std::exception& e) {
            entry["expansion_error"] = e.what();  // e.g. non-affine in fourier
        }
        report[name] = entry;
    }
    std::ofstream out(run.dir / "spectral.json");
    out << report.dump(2) << "\n";
    std::printf("%s\n", report.dump(2).c_str());
    run.manifest["artifacts"] = {"spectral.csv", "spectral.json"};
    return 0;
}

int cmd_invariant(Run& run) {
    LocalRule f = load_rule(run.cfg);
    NoiseKernel noise = load_noise(run.cfg, f.alphabet);
    PcaRule phi = compose_pca(f, noise);
    SiteSet A = SiteSet::line(run.cfg.ints("window"));
    std::vector<int> w;
    for (char c : run.cfg.str("pattern")) w.push_back(c - '0');
    int n = static_cast<int>(run.cfg.integer("n", "3"));
    std::uint64_t budget =
        static_cast<std::uint64_t>(run.cfg.integer("budget", "10000000"));
    auto start = std::chrono::steady_clock::now();
    InvariantResult r = approximate_invariant(phi, A, w, n, budget);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    json out{{"value", r.value},
             {"m_final", r.m_final},
             {"k", r.k},
             {"candidates_checked", r.candidates_checked},
             {"elapsed", elapsed}};
    std::ofstream os(run.dir / "invariant.json");
    os << out.dump(2) << "\n";
    std::printf("%s\n", out.dump(2).c_str());
    run.manifest["artifacts"] = {"invariant.json"};
    return 0;
}

int cmd_percolation(Run& run) {
    std::vector<std::int64_t> offs = run.cfg.ints("window");
    Neighborhood nbhd = Neighborhood::line(offs);
    double p = run.cfg.num("p");
    std::int64_t horizon = run.cfg.integer("horizon", "1000");
    std::size_t trials = static_cast<std::size_t>(run.cfg.integer("trials", "1000"));
    double survival =
        percolation_survival(p, nbhd, horizon, trials, RandomField(run.seed));
    json out{{"p", p},
             {"horizon", horizon},
             {"trials", trials},
             {"survival", survival}};
    std::ofstream os(run.dir / "percolation.json");
    os << out.dump(2) << "\n";
    std::printf("%s\n", out.dump(2).c_str());
    run.manifest["artifacts"] = {"percolation.json"};
    return 0;
}

int cmd_certify(Run& run) {
    LocalRule f = load_rule(run.cfg);
    NoiseKernel noise = load_noise(run.cfg, f.alphabet);
    PcaRule phi = compose_pca(f, noise);
    Certificate c = certify(phi);
    json out{{"p_question", c.p_q},
             {"neighborhood_size", c.m},
             {"bound", c.bound},
             {"bound_kind", c.bound_kind},
             {"verdict", c.ergodic ? "ergodic_certified" : "inconclusive"}};
    std::ofstream os(run.dir / "certificate.json");
    os << out.dump(2) << "\n";
    std::printf("%s\n", out.dump(2).c_str());
    run.manifest["artifacts"] = {"certificate.json"};
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noisy cellular automata: simulation, perfect sampling, "
                 "spectral and invariant-measure analysis"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    std::int64_t seed_override = -1;
    const std::vector<std::string> names{"simulate",   "sample",  "diagnose",
                                         "spectral",   "invariant",
                                         "percolation", "certify"};
    for (const std::string& n : names) {
        CLI::App* sub = app.add_subcommand(n);
        sub->add_option("--config", config_path, "experiment config file")
            ->required();
        sub->add_option("--seed", seed_override, "override the config seed");
        sub->add_option("--out", out_dir, "output root directory");
    }
    CLI11_PARSE(app, argc, argv);
    std::string sub = app.get_subcommands().front()->get_name();
    try {
        Run run;
        run.cfg = parse_config(config_path);
        run.seed = static_cast<std::uint64_t>(
            seed_override >= 0 ? seed_override : run.cfg.integer("seed", "0"));
        run.cfg.kv["seed"] = std::to_string(run.seed);
        run.cfg.text = canonical_text(run.cfg);
        fs::path root = out_dir.empty() ? fs::path("runs") : fs::path(out_dir);
        run.dir = root / (sub + "-" + content_hash(run.cfg.text));
        fs::create_directories(run.dir);
        int rc;
        if (sub == "simulate") rc = cmd_simulate(run);
        else if (sub == "sample") rc = cmd_sample(run);
        else if (sub == "diagnose") rc = cmd_diagnose(run);
        else if (sub == "spectral") rc = cmd_spectral(run);
        else if (sub == "invariant") rc = cmd_invariant(run);
        else if (sub == "percolation") rc = cmd_percolation(run);
        else rc = cmd_certify(run);
        if (rc == 0) {
            run.finish(sub);
            std::printf("wrote %s\n", run.dir.string().c_str());
        }
        return rc;
    } catch (const std::exception& e) {
        json err{{"error", e.what()}};
        std::printf("%s\n", err.dump().c_str());
        return 1;
    }
}
