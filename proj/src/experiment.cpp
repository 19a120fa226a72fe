#include "vfb/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "vfb/affine.hpp"

namespace vfb {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& field, const std::string& what)
{
    if (!ok) throw std::invalid_argument("config field '" + field + "' " + what);
}

std::vector<double> number_list(const json& val, const std::string& field)
{
    if (!val.is_array())
        throw std::invalid_argument("config field '" + field + "' must be an array");
    std::vector<double> out;
    for (const auto& v : val) {
        if (!v.is_number())
            throw std::invalid_argument("config field '" + field
                                        + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

RunConfig parse_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ")
                                    + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("config must be a JSON object");

    RunConfig c;
    for (const auto& [key, val] : j.items()) {
        if (key == "gamma") c.gamma = val.get<double>();
        else if (key == "delta") c.delta = val.get<double>();
        else if (key == "eps") c.eps = val.get<double>();
        else if (key == "n") c.n = val.get<int>();
        else if (key == "dtau") c.dtau = val.get<double>();
        else if (key == "tau_max") c.tau_max = val.get<double>();
        else if (key == "output_stride") c.output_stride = val.get<int>();
        else if (key == "cfl") c.cfl = val.get<double>();
        else if (key == "r_asymptotic") c.r_asymptotic = val.get<double>();
        else if (key == "norm_order") c.norm_order = val.get<int>();
        else if (key == "cutoff_inner") c.cutoff_inner = val.get<double>();
        else if (key == "cutoff_outer") c.cutoff_outer = val.get<double>();
        else if (key == "initial") c.initial = val.get<std::string>();
        else if (key == "lambda0") c.lambda0 = val.get<double>();
        else if (key == "lambdadot0") c.lambdadot0 = val.get<double>();
        else if (key == "label") c.label = val.get<std::string>();
        else if (key == "gamma_list") c.gamma_list = number_list(val, key);
        else if (key == "delta_list") c.delta_list = number_list(val, key);
        else if (key == "eps_list") c.eps_list = number_list(val, key);
        else throw std::invalid_argument("unknown config field '" + key + "'");
    }

    require(c.gamma > 1.0, "gamma", "must exceed 1");
    require(c.delta >= 0.0, "delta", "must be nonnegative");
    require(c.eps >= 0.0, "eps", "must be nonnegative");
    require(c.n >= 8, "n", "must be at least 8");
    require(c.dtau > 0.0, "dtau", "must be positive");
    require(c.tau_max > 0.0, "tau_max", "must be positive");
    require(c.output_stride >= 1, "output_stride", "must be at least 1");
    require(c.cfl > 0.0, "cfl", "must be positive");
    require(c.r_asymptotic > 0.0 && c.r_asymptotic < 1.0, "r_asymptotic",
            "must lie in (0,1)");
    require(c.norm_order >= 0 && c.norm_order <= 2, "norm_order",
            "must be 0, 1 or 2");
    require(c.cutoff_inner > 0.0 && c.cutoff_inner < c.cutoff_outer
                && c.cutoff_outer < 1.0,
            "cutoff_inner/cutoff_outer", "must satisfy 0 < inner < outer < 1");
    require(c.initial == "perturbation" || c.initial == "affine", "initial",
            "must be 'perturbation' or 'affine'");
    require(c.lambda0 > 0.0, "lambda0", "must be positive");
    require(!c.label.empty(), "label", "must be nonempty");
    for (double g : c.gamma_list) require(g > 1.0, "gamma_list", "entries must exceed 1");
    for (double d : c.delta_list) require(d >= 0.0, "delta_list", "entries must be nonnegative");
    for (double e : c.eps_list) require(e >= 0.0, "eps_list", "entries must be nonnegative");
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

std::string canonical_config(const RunConfig& c)
{
    json j;
    j["cfl"] = c.cfl;
    j["cutoff_inner"] = c.cutoff_inner;
    j["cutoff_outer"] = c.cutoff_outer;
    j["delta"] = c.delta;
    j["delta_list"] = c.delta_list;
    j["dtau"] = c.dtau;
    j["eps"] = c.eps;
    j["eps_list"] = c.eps_list;
    j["gamma"] = c.gamma;
    j["gamma_list"] = c.gamma_list;
    j["initial"] = c.initial;
    j["label"] = c.label;
    j["lambda0"] = c.lambda0;
    j["lambdadot0"] = c.lambdadot0;
    j["n"] = c.n;
    j["norm_order"] = c.norm_order;
    j["output_stride"] = c.output_stride;
    j["r_asymptotic"] = c.r_asymptotic;
    j["tau_max"] = c.tau_max;
    return j.dump();
}

std::uint64_t fnv1a64(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const RunConfig& c)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_config(c))));
    return buf;
}

std::function<double(double)> initial_phi(const RunConfig& c)
{
    if (c.initial == "affine") {
        double l0 = c.lambda0;
        return [l0](double r) { return l0 * r; };
    }
    double eps = c.eps;
    return [eps](double r) { return r * (1.0 + eps * (1.0 - r * r)); };
}

std::function<double(double)> initial_nu(const RunConfig& c)
{
    if (c.initial == "affine") {
        double v = c.lambdadot0 - c.lambda0;
        return [v](double r) { return v * r; };
    }
    double eps = c.eps;
    return [eps](double r) { return eps * r * (1.0 - r * r); };
}

RunRecord run_experiment(const RunConfig& c)
{
    auto t0 = std::chrono::steady_clock::now();

    EquationOfState eos = make_eos(c.gamma);
    EnthalpyProfile profile = model_profile(c.delta, eos.alpha);
    SolverConfig scfg;
    scfg.n = c.n;
    scfg.dtau = c.dtau;
    scfg.tau_max = c.tau_max;
    scfg.output_stride = c.output_stride;
    scfg.cfl = c.cfl;
    scfg.r_asymptotic = c.r_asymptotic;
    RadialSolver solver(eos, profile, scfg);

    RadialRun run = solver.run(initial_phi(c), initial_nu(c));

    RunRecord rec;
    rec.label = c.label;
    rec.hash = config_hash(c);

    CutoffPair cutoffs(c.cutoff_inner, c.cutoff_outer);
    if (!run.frames.empty())
        rec.reports = analyze_run(run, solver.grid(), profile, eos, cutoffs,
                                  c.norm_order);
    for (const EnergyReport& r : rec.reports) {
        rec.sup_S = std::max(rec.sup_S, r.S_N);
        if (!(r.apriori.S_ok && r.apriori.A_ok && r.apriori.J_ok)
            && rec.apriori_clean) {
            rec.apriori_clean = false;
            std::ostringstream os;
            os << "apriori_violation(tau=" << r.tau << ")";
            rec.status = os.str();
        }
    }

    if (run.status == RunStatus::InvertedMap)
        rec.status = "inverted_map(" + run.message + ")";
    else if (run.status == RunStatus::CflViolation)
        rec.status = "cfl_violation(" + run.message + ")";
    else if (rec.apriori_clean)
        rec.status = "completed";

    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rec;
}

namespace {

void format_row(std::ostream& os, const EnergyReport& r, char sep)
{
    auto order = [&](const std::vector<NormOrder>& v, std::size_t m,
                     bool boundary) {
        if (m >= v.size()) return 0.0;
        return boundary ? v[m].boundary : v[m].interior;
    };
    char buf[32];
    auto put = [&](double x, bool last = false) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        os << buf << (last ? '\n' : sep);
    };
    put(r.tau);
    for (std::size_t m = 0; m < 3; ++m) {
        put(order(r.x_theta, m, true));
        put(order(r.x_theta, m, false));
    }
    put(r.y_theta.grad_total());
    put(r.y_theta.div_total());
    put(r.y_theta.curl_total());
    put(r.S_N);
    put(r.C_N);
    put(r.damping);
    put(r.apriori.S_ok ? 1.0 : 0.0);
    put(r.apriori.A_ok ? 1.0 : 0.0);
    put(r.apriori.J_ok ? 1.0 : 0.0);
    put(r.res_zero_order, true);
}

const char* kColumns =
    "tau,x0_bnd,x0_int,x1_bnd,x1_int,x2_bnd,x2_int,ygrad,ydiv,ycurl,"
    "S_N,C_N,damping,apriori_S,apriori_A,apriori_J,res_zero_order";

void atomic_write(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

} // namespace

void write_csv(const RunRecord& rec, const std::string& path)
{
    std::ostringstream os;
    os << kColumns << '\n';
    for (const EnergyReport& r : rec.reports) format_row(os, r, ',');
    atomic_write(path, os.str());
}

void write_dat(const RunRecord& rec, const std::string& path)
{
    std::ostringstream os;
    os << "# ";
    for (const char* p = kColumns; *p; ++p) os << (*p == ',' ? ' ' : *p);
    os << '\n';
    for (const EnergyReport& r : rec.reports) format_row(os, r, ' ');
    atomic_write(path, os.str());
}

std::string output_root(const std::string& fallback)
{
    const char* env = std::getenv("VFBLAB_OUT_DIR");
    return (env && *env) ? std::string(env) : fallback;
}

std::vector<RunRecord> sweep_experiment(const RunConfig& base, int workers,
                                        const std::string& out_dir)
{
    auto axis = [](const std::vector<double>& list, double scalar) {
        return list.empty() ? std::vector<double>{scalar} : list;
    };
    std::vector<double> gammas = axis(base.gamma_list, base.gamma);
    std::vector<double> deltas = axis(base.delta_list, base.delta);
    std::vector<double> epss = axis(base.eps_list, base.eps);

    std::vector<RunConfig> jobs;
    for (double g : gammas)
        for (double d : deltas)
            for (double e : epss) {
                RunConfig c = base;
                c.gamma = g;
                c.delta = d;
                c.eps = e;
                c.gamma_list.clear();
                c.delta_list.clear();
                c.eps_list.clear();
                std::ostringstream os;
                os << base.label << "_g" << g << "_d" << d << "_e" << e;
                c.label = os.str();
                jobs.push_back(std::move(c));
            }

    std::vector<RunRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    if (workers < 1) workers = 1;

    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                records[i] = run_experiment(jobs[i]);
                if (!out_dir.empty()) {
                    std::string stem =
                        out_dir + "/" + jobs[i].label + "-" + records[i].hash;
                    write_csv(records[i], stem + ".csv");
                    write_dat(records[i], stem + ".dat");
                }
            } catch (const std::exception& e) {
                records[i].label = jobs[i].label;
                records[i].status = std::string("error(") + e.what() + ")";
            }
        }
    };

    std::vector<std::thread> pool;
    for (int k = 0; k < workers; ++k) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
    return records;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& base, int levels,
                                              bool temporal)
{
    if (levels < 3)
        throw std::invalid_argument("convergence study needs at least 3 levels");
    if (base.initial != "affine")
        throw std::invalid_argument(
            "convergence study requires affine initial data");

    EquationOfState eos = make_eos(base.gamma);
    EnthalpyProfile profile = model_profile(base.delta, eos.alpha);

    auto solve = [&](int n, double dtau) {
        SolverConfig scfg;
        scfg.n = n;
        scfg.dtau = dtau;
        scfg.tau_max = base.tau_max;
        scfg.output_stride = std::numeric_limits<int>::max(); // final frame only
        scfg.cfl = base.cfl;
        scfg.r_asymptotic = base.r_asymptotic;
        RadialSolver solver(eos, profile, scfg);
        RadialRun run = solver.run(initial_phi(base), initial_nu(base));
        if (run.status != RunStatus::Completed)
            throw std::runtime_error("convergence run failed: " + run.message);
        return run;
    };

    std::vector<ConvergenceRow> rows;
    double nan = std::numeric_limits<double>::quiet_NaN();

    if (!temporal) {
        RescaledAffine ref = oracle_rescaled(base.lambda0, base.lambdadot0,
                                             base.delta, eos, {base.tau_max},
                                             1e-3)
                                 .front();
        for (int l = 0; l < levels; ++l) {
            int shift = levels - 1 - l;
            int n = ((base.n - 1) >> shift) + 1;
            if (((n - 1) << shift) + 1 != base.n || n < 8)
                throw std::invalid_argument(
                    "grid size does not support the requested halvings");
            RadialRun run = solve(n, base.dtau);
            const RadialFrame& fr = run.frames.back();
            double err = 0.0;
            for (int j = 0; j < n; ++j) {
                double r = static_cast<double>(j) / (n - 1);
                err = std::max(err, std::abs(fr.phi[j] - ref.value * r));
            }
            ConvergenceRow row{n, base.dtau, err,
                               rows.empty() ? nan : rows.back().error / err};
            rows.push_back(row);
        }
    } else {
        std::vector<RadialRun> runs;
        for (int l = 0; l <= levels; ++l) {
            double dtau = base.dtau * std::pow(2.0, levels - 1 - l);
            runs.push_back(solve(base.n, dtau));
        }
        // error of level l = sup difference to the next-finer step
        for (int l = 0; l < levels; ++l) {
            const auto& a = runs[l].frames.back().phi;
            const auto& b = runs[l + 1].frames.back().phi;
            double err = 0.0;
            for (int j = 0; j < base.n; ++j)
                err = std::max(err, std::abs(a[j] - b[j]));
            ConvergenceRow row{base.n, base.dtau * std::pow(2.0, levels - 1 - l),
                               err, rows.empty() ? nan : rows.back().error / err};
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace vfb
