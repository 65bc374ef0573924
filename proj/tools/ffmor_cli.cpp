#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ffmor/analysis.hpp"
#include "ffmor/bt.hpp"
#include "ffmor/model_io.hpp"
#include "ffmor/pfdbt.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ffmor;

namespace {

int grid_points_from_env() {
    if (const char* env = std::getenv("FFMOR_GRID_POINTS")) {
        const int n = std::atoi(env);
        if (n >= 2) return n;
    }
    return 600;
}

const char* method_name(Method m) {
    switch (m) {
        case Method::LyaBT: return "lyabt";
        case Method::SPA: return "spa";
        case Method::PFDBT_R1: return "pfdbt-r1";
        case Method::PFDBT_R2: return "pfdbt-r2";
    }
    return "?";
}

// Argmin-bound rho, preferring grid points whose reduced model stayed
// stable; falls back to the overall argmin when none did.
double pick_auto_rho(const RhoSweepResult& sweep) {
    double best = sweep.best_rho;
    double best_bound = std::numeric_limits<double>::infinity();
    bool found_stable = false;
    for (const RhoSweepPoint& pt : sweep.points) {
        if (!pt.admissible || !pt.reduced_stable) continue;
        if (pt.bound < best_bound) {
            best_bound = pt.bound;
            best = pt.rho;
            found_stable = true;
        }
    }
    return found_stable ? best : sweep.best_rho;
}

struct ReduceOptions {
    std::string model_path, method = "lyabt", band_spec = "ef", out_dir;
    Eigen::Index order = 0;
    std::optional<double> rho;
    bool rho_auto = false;
    std::string routing = "r1";
    std::string lower_hf = "consistent";
};

ReductionResult run_reduction(const StateSpaceModel& model, const ReduceOptions& opt,
                              const FrequencyRange& band) {
    if (opt.method == "lyabt" || opt.method == "spa") {
        BalancedRealization bal = balance(model);
        return opt.method == "lyabt" ? truncate(bal, opt.order) : spa(bal, opt.order);
    }
    if (opt.method != "pfdbt") throw Error("unknown method '" + opt.method + "'");
    if (band.variant() == RangeVariant::EF)
        throw Error("pfdbt needs a finite band (lf/mf/hf)");
    const Routing routing = opt.routing == "r2" ? Routing::R2Lower : Routing::R1Upper;
    const LowerHfVariant variant = opt.lower_hf == "printed"
                                       ? LowerHfVariant::AsPrinted
                                       : LowerHfVariant::Consistent;
    double rho;
    if (opt.rho_auto) {
        RhoSweepResult sweep =
            sweep_rho(model, band, opt.order, routing, default_rho_grid(model, band));
        rho = pick_auto_rho(sweep);
    } else if (opt.rho) {
        rho = *opt.rho;
    } else {
        throw Error("pfdbt needs --rho or --rho-auto");
    }
    return pfdbt(model, band, rho, opt.order, routing, variant);
}

int cmd_reduce(const ReduceOptions& opt) {
    StateSpaceModel model = load_model(opt.model_path);
    FrequencyRange band = parse_band_spec(opt.band_spec);
    ReductionResult result = run_reduction(model, opt, band);

    fs::create_directories(opt.out_dir);
    const fs::path out(opt.out_dir);
    save_model(result.reduced, (out / "reduced.json").string());

    const int points = grid_points_from_env();
    SigmaSweep err = band_error(model, result.reduced, band, points);
    save_sweep(err, (out / "error_sweep.csv").string());

    json report;
    report["method"] = method_name(result.method);
    report["band"] = format_band_spec(band);
    report["order"] = static_cast<long long>(result.reduced.order());
    report["bound"] = result.bound;
    switch (result.bound_kind) {
        case BoundKind::EF: report["bound_kind"] = "ef"; break;
        case BoundKind::LF: report["bound_kind"] = "lf"; break;
        case BoundKind::MF: report["bound_kind"] = "mf"; break;
        case BoundKind::HF: report["bound_kind"] = "hf"; break;
    }
    if (result.rho)
        report["rho"] = *result.rho;
    else
        report["rho"] = nullptr;
    json tail = json::array();
    for (Eigen::Index i = 0; i < result.tail_sv.size(); ++i)
        tail.push_back(result.tail_sv(i));
    report["tail_sv"] = tail;
    report["stability"] = {{"reduced_stable", !result.stability_lost},
                           {"stability_lost_warning", result.stability_lost}};
    report["grid_points"] = points;
    report["files"] = {{"reduced", "reduced.json"}, {"error_sweep", "error_sweep.csv"}};
    std::ofstream rep(out / "report.json");
    if (!rep) throw IoError("cannot write report.json");
    rep << report.dump(2) << '\n';

    if (result.stability_lost) {
        std::cerr << "warning: reduced model lost stability (try a larger rho)\n";
        return 2;
    }
    return 0;
}

int cmd_analyze(const std::string& model_path, const std::string& band_spec,
                const std::string& out_file, int points) {
    StateSpaceModel model = load_model(model_path);
    SigmaSweep sweep = sigma_sweep(model, parse_band_spec(band_spec), points);
    save_sweep(sweep, out_file);
    return 0;
}

int cmd_bounds(const std::string& model_path, const std::string& band_spec,
               std::optional<double> rho_opt, bool rho_auto,
               const std::string& routing_str, std::optional<double> tol,
               const std::string& out_file) {
    StateSpaceModel model = load_model(model_path);
    FrequencyRange band = parse_band_spec(band_spec);
    if (band.variant() == RangeVariant::EF)
        throw Error("bounds needs a finite band (lf/mf/hf)");
    const Routing routing = routing_str == "r2" ? Routing::R2Lower : Routing::R1Upper;
    const Eigen::Index n = model.order();

    BalancedRealization bal = balance(model);
    double rho;
    if (rho_auto) {
        RhoSweepResult sweep =
            sweep_rho(model, band, std::max<Eigen::Index>(1, n / 2), routing,
                      default_rho_grid(model, band));
        rho = pick_auto_rho(sweep);
    } else if (rho_opt) {
        rho = *rho_opt;
    } else {
        throw Error("bounds needs --rho or --rho-auto");
    }

    std::ofstream out(out_file);
    if (!out) throw IoError("cannot write " + out_file);
    out << "r,bound_lyabt,bound_spa,bound_pfdbt\n";
    std::vector<double> ef_bounds(n), ff_bounds(n);
    for (Eigen::Index r = 1; r < n; ++r) {
        const double ef = 2.0 * bal.hankel_sv.tail(n - r).sum();
        const double ff = pfdbt(model, band, rho, r, routing).bound;
        ef_bounds[r] = ef;
        ff_bounds[r] = ff;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g\n",
                      static_cast<long long>(r), ef, ef, ff);
        out << buf;
    }
    if (tol) {
        auto min_order = [&](const std::vector<double>& bounds) -> long long {
            for (Eigen::Index r = 1; r < n; ++r)
                if (bounds[r] <= *tol) return r;
            return -1;
        };
        std::cout << "min_order_lyabt=" << min_order(ef_bounds) << '\n'
                  << "min_order_spa=" << min_order(ef_bounds) << '\n'
                  << "min_order_pfdbt=" << min_order(ff_bounds) << '\n';
    }
    return 0;
}

int cmd_compare(const std::string& model_path, const std::string& band_spec,
                Eigen::Index order, std::optional<double> rho_opt,
                const std::string& routing_str, std::vector<std::string> methods,
                const std::string& out_file) {
    StateSpaceModel model = load_model(model_path);
    FrequencyRange band = parse_band_spec(band_spec);
    if (methods.empty()) methods = {"lyabt", "spa", "pfdbt"};
    const int points = grid_points_from_env();

    std::vector<SigmaSweep> sweeps;
    for (const std::string& method : methods) {
        ReduceOptions opt;
        opt.method = method;
        opt.order = order;
        opt.rho = rho_opt;
        opt.routing = routing_str;
        ReductionResult result = run_reduction(model, opt, band);
        sweeps.push_back(band_error(model, result.reduced, band, points));
    }

    std::ofstream out(out_file);
    if (!out) throw IoError("cannot write " + out_file);
    out << "omega";
    for (const std::string& method : methods) out << ",err_" << method;
    out << '\n';
    const std::size_t rows = sweeps.front().points.size();
    for (std::size_t i = 0; i < rows; ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", sweeps.front().points[i].first);
        out << buf;
        for (const SigmaSweep& s : sweeps) {
            std::snprintf(buf, sizeof(buf), ",%.17g", s.points[i].second);
            out << buf;
        }
        out << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-frequency model order reduction toolkit"};
    app.require_subcommand(1);

    ReduceOptions ropt;
    auto* reduce = app.add_subcommand("reduce", "reduce a model and emit artifacts");
    reduce->add_option("--model", ropt.model_path, "model file or matrix-market dir")
        ->required();
    reduce->add_option("--method", ropt.method, "lyabt | spa | pfdbt");
    reduce->add_option("--band", ropt.band_spec, "ef | lf:WL | mf:W1,W2 | hf:WH");
    reduce->add_option("--order", ropt.order, "reduced order r")->required();
    double rho_val = 0.0;
    auto* rho_flag = reduce->add_option("--rho", rho_val, "mapping parameter");
    reduce->add_flag("--rho-auto", ropt.rho_auto, "pick rho by line search");
    reduce->add_option("--routing", ropt.routing, "r1 | r2");
    reduce->add_option("--lower-hf-variant", ropt.lower_hf, "consistent | printed");
    reduce->add_option("--out", ropt.out_dir, "output directory")->required();

    std::string a_model, a_band = "ef", a_out;
    int a_points = grid_points_from_env();
    auto* analyze = app.add_subcommand("analyze", "sigma-max sweep over a band");
    analyze->add_option("--model", a_model)->required();
    analyze->add_option("--band", a_band);
    analyze->add_option("--points", a_points);
    analyze->add_option("--out", a_out, "output CSV")->required();

    std::string b_model, b_band, b_routing = "r1", b_out;
    double b_rho = 0.0, b_tol = 0.0;
    bool b_rho_auto = false;
    auto* bounds = app.add_subcommand("bounds", "bound-vs-order table per method");
    bounds->add_option("--model", b_model)->required();
    bounds->add_option("--band", b_band)->required();
    auto* b_rho_flag = bounds->add_option("--rho", b_rho);
    bounds->add_flag("--rho-auto", b_rho_auto);
    bounds->add_option("--routing", b_routing);
    auto* b_tol_flag = bounds->add_option("--tol", b_tol, "print min orders for this tolerance");
    bounds->add_option("--out", b_out, "output CSV")->required();

    std::string c_model, c_band, c_routing = "r1", c_out;
    long long c_order = 0;
    double c_rho = 0.0;
    bool c_has_rho = false;
    std::vector<std::string> c_methods;
    auto* compare = app.add_subcommand("compare", "in-band error curves per method");
    compare->add_option("--model", c_model)->required();
    compare->add_option("--band", c_band)->required();
    compare->add_option("--order", c_order)->required();
    auto* c_rho_flag = compare->add_option("--rho", c_rho);
    compare->add_option("--routing", c_routing);
    compare->add_option("--method", c_methods, "repeatable; defaults to all three");
    compare->add_option("--out", c_out, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*reduce) {
            if (rho_flag->count()) ropt.rho = rho_val;
            return cmd_reduce(ropt);
        }
        if (*analyze) return cmd_analyze(a_model, a_band, a_out, a_points);
        if (*bounds)
            return cmd_bounds(b_model, b_band,
                              b_rho_flag->count() ? std::optional<double>(b_rho)
                                                  : std::nullopt,
                              b_rho_auto, b_routing,
                              b_tol_flag->count() ? std::optional<double>(b_tol)
                                                  : std::nullopt,
                              b_out);
        if (*compare) {
            c_has_rho = c_rho_flag->count() > 0;
            return cmd_compare(c_model, c_band, c_order,
                               c_has_rho ? std::optional<double>(c_rho) : std::nullopt,
                               c_routing, c_methods, c_out);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
