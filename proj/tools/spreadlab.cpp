// spreadlab: batch front door for spreadness checking, certification,
// instance generation, noise/KL computations, lower bounds, low-degree
// analysis, regression experiments, and spark reduction checks.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "spreadlab/certify.hpp"
#include "spreadlab/fano.hpp"
#include "spreadlab/instances.hpp"
#include "spreadlab/lowdeg.hpp"
#include "spreadlab/matrix_io.hpp"
#include "spreadlab/regression.hpp"
#include "spreadlab/spark.hpp"
#include "spreadlab/version.hpp"

using json = nlohmann::ordered_json;
using namespace spreadlab;

namespace {

json envelope(const std::string& subcommand, std::uint64_t seed, json config, json result) {
    json rep;
    rep["tool"] = "spreadlab";
    rep["version"] = kVersion;
    rep["subcommand"] = subcommand;
    rep["seed"] = seed;
    rep["config"] = std::move(config);
    rep["result"] = std::move(result);
    return rep;
}

void emit(const json& report, const std::string& output, const std::string& summary) {
    std::printf("%s\n", summary.c_str());
    const std::string text = report.dump(2) + "\n";
    if (output.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    // Write-to-temp then atomic rename; never leave partial reports.
    const std::string tmp = output + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError(output + ": cannot open for writing");
        out << text;
        if (!out) throw ValidationError(output + ": write failed");
    }
    std::filesystem::rename(tmp, output);
}

json verdict_to_json(const SpreadVerdict& v) {
    json j;
    j["is_spread"] = v.is_spread;
    j["certified"] = v.certified;
    j["method"] = to_string(v.method);
    j["achieved_ratio"] = v.achieved_ratio;
    if (v.witness_set) {
        j["witness_set"] = *v.witness_set;
    } else {
        j["witness_set"] = nullptr;
    }
    return j;
}

Matrix load_orthonormal_span(const std::string& path) {
    const Matrix m = read_matrix(path);
    return orthonormal_basis(m);
}

int run_gen(const std::string& kind, Eigen::Index n, Eigen::Index d, double alpha, double sigma,
            double gamma, double rho, double nbr_sigma, bool dense_rotation, std::uint64_t seed,
            const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    json meta;
    meta["kind"] = kind;
    meta["n"] = n;
    meta["d"] = d;
    meta["seed"] = seed;
    std::string summary;

    if (kind == "gaussian") {
        write_matrix(out_dir + "/design.sprd", gen_gaussian_null(n, d, seed));
        summary = "gen gaussian " + std::to_string(n) + "x" + std::to_string(d);
    } else if (kind == "planted") {
        const NBRParams params{rho, nbr_sigma};
        const PlantedInstance inst = gen_planted(n, d, params, seed);
        write_matrix(out_dir + "/design.sprd", inst.observed);
        write_matrix(out_dir + "/hidden.sprd", inst.hidden);
        meta["rho"] = rho;
        meta["nbr_sigma"] = nbr_sigma;
        meta["rho_prime"] = params.rho_prime();
        summary = "gen planted " + std::to_string(n) + "x" + std::to_string(d);
    } else if (kind == "d-over-alpha" || kind == "logd-over-alpha2") {
        const HardTag tag = hard_tag_from_string(kind);
        if (gamma > 0.0) sigma = calibrate_sigma(tag, gamma, n, d, alpha);
        if (!(sigma > 0.0)) throw ValidationError("gen: give --sigma or --gamma for hard constructions");
        const InstanceBundle bundle = tag == HardTag::d_over_alpha
                                          ? gen_hard_d_over_alpha(n, d, alpha, sigma, seed, dense_rotation)
                                          : gen_hard_logd_over_alpha2(n, d, alpha, sigma, seed);
        write_matrix(out_dir + "/design.sprd", bundle.design);
        meta["tag"] = bundle.meta.tag;
        meta["alpha"] = alpha;
        meta["sigma"] = sigma;
        meta["lambda"] = bundle.meta.lambda;
        meta["m_or_k"] = bundle.meta.m_or_k;
        meta["separation"] = bundle.meta.separation;
        meta["dense_rotation"] = bundle.meta.dense_rotation;
        summary = "gen " + kind + " " + std::to_string(n) + "x" + std::to_string(d) +
                  " sigma=" + std::to_string(sigma);
    } else if (kind == "rip-not-spread" || kind == "spread-not-rip") {
        const auto ce = kind == "rip-not-spread" ? CounterexampleKind::rip_not_spread
                                                 : CounterexampleKind::spread_not_rip;
        write_matrix(out_dir + "/design.sprd", gen_counterexamples(ce, n, d, seed));
        summary = "gen " + kind + " " + std::to_string(n) + "x" + std::to_string(d);
    } else {
        throw UnknownTagError("gen: unknown kind " + kind);
    }

    const std::string tmp = out_dir + "/meta.json.tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << meta.dump(2) << "\n";
    }
    fs::rename(tmp, out_dir + "/meta.json");
    std::printf("%s -> %s\n", summary.c_str(), out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spreadlab: well-spreadness toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string input, output, out_dir, kind, method = "exact", construction, mode = "exact-dp",
                estimator_name = "huber-irls", regress_mode = "hardness", csv_path;
    Eigen::Index n = 0, d = 0, m = 1;
    double delta = 0.9, alpha = 0.25, sigma = 0.0, gamma = 0.0, rho = 0.1, nbr_sigma = 0.0,
           lambda = 0.5, threshold = 2.0, tol = 1e-8, tuning = 1.0, amplitude = 1.0,
           noise_lambda = 0.0;
    long long shift = 1;
    int restarts = 20, trials = 100, seeds = 50, degree = 4, cap = 64, pairs = 100;
    std::uint64_t seed = 0;
    bool dense_rotation = false, control = false, calibrate = false;

    auto* gen = app.add_subcommand("gen", "generate design matrices and instance bundles");
    gen->add_option("--kind", kind)->required();
    gen->add_option("--n", n)->required();
    gen->add_option("--d", d)->required();
    gen->add_option("--alpha", alpha);
    gen->add_option("--sigma", sigma);
    gen->add_option("--gamma", gamma);
    gen->add_option("--rho", rho);
    gen->add_option("--nbr-sigma", nbr_sigma);
    gen->add_flag("--dense-rotation", dense_rotation);
    gen->add_option("--seed", seed);
    gen->add_option("--out", out_dir)->required();

    auto* sc = app.add_subcommand("spread-check", "exact or heuristic spreadness verdict");
    sc->add_option("--input", input)->required();
    sc->add_option("--m", m)->required();
    sc->add_option("--delta", delta)->required();
    sc->add_option("--method", method)->check(CLI::IsMember({"exact", "heuristic"}));
    sc->add_option("--restarts", restarts);
    sc->add_option("--seed", seed);
    sc->add_option("--output", output);

    auto* ct = app.add_subcommand("certify", "certified well-spreadness of a design matrix");
    ct->add_option("--input", input);
    ct->add_option("--delta", delta);
    ct->add_option("--threshold", threshold);
    ct->add_option("--tol", tol);
    ct->add_option("--seed", seed);
    ct->add_option("--output", output);
    ct->add_flag("--calibrate", calibrate, "report the certified-distortion quantile over Gaussian seeds");
    ct->add_option("--seeds", seeds);
    ct->add_option("--n", n);
    ct->add_option("--d", d);

    auto* kl = app.add_subcommand("kl", "shift KL divergence of the symmetric geometric law");
    kl->add_option("--alpha", alpha)->required();
    kl->add_option("--lambda", lambda)->required();
    kl->add_option("--shift", shift)->required();
    kl->add_option("--output", output);

    auto* fano = app.add_subcommand("fano", "estimation lower bound for a hard construction");
    fano->add_option("--construction", construction)->required();
    fano->add_option("--n", n)->required();
    fano->add_option("--d", d)->required();
    fano->add_option("--alpha", alpha)->required();
    fano->add_option("--gamma", gamma)->required();
    fano->add_option("--pairs", pairs);
    fano->add_option("--seed", seed);
    fano->add_option("--output", output);

    auto* ld = app.add_subcommand("lowdeg", "low-degree likelihood-ratio norm");
    ld->add_option("--n", n)->required();
    ld->add_option("--d", d)->required();
    ld->add_option("--rho", rho)->required();
    ld->add_option("--sigma", nbr_sigma);
    ld->add_option("--degree", degree)->required();
    ld->add_option("--mode", mode)->check(CLI::IsMember({"exact-dp", "paper-bound"}));
    ld->add_option("--cap", cap);
    ld->add_option("--output", output);

    auto* di = app.add_subcommand("distinguish", "degree-4 statistic separation experiment");
    di->add_option("--n", n)->required();
    di->add_option("--d", d)->required();
    di->add_option("--rho", rho)->required();
    di->add_option("--sigma", nbr_sigma);
    di->add_option("--trials", trials);
    di->add_option("--seed", seed);
    di->add_option("--output", output);

    auto* rg = app.add_subcommand("regress", "oblivious-regression simulation harness");
    rg->add_option("--mode", regress_mode)->check(CLI::IsMember({"hardness", "trend"}));
    rg->add_option("--construction", construction);
    rg->add_option("--n", n)->required();
    rg->add_option("--d", d)->required();
    rg->add_option("--alpha", alpha)->required();
    rg->add_option("--gamma", gamma);
    rg->add_option("--estimator", estimator_name)
        ->check(CLI::IsMember({"huber-irls", "least-squares", "oracle-inlier-ls"}));
    rg->add_option("--seeds", seeds);
    rg->add_option("--seed", seed);
    rg->add_flag("--control", control);
    rg->add_option("--tuning", tuning);
    rg->add_option("--amplitude", amplitude);
    rg->add_option("--noise-lambda", noise_lambda);
    rg->add_option("--csv", csv_path);
    rg->add_option("--output", output);

    auto* sp = app.add_subcommand("spark", "exact spark and reduction consistency");
    sp->add_option("--input", input)->required();
    sp->add_option("--m", m);
    sp->add_option("--output", output);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return run_gen(kind, n, d, alpha, sigma, gamma, rho, nbr_sigma, dense_rotation, seed,
                           out_dir);
        }

        if (sc->parsed()) {
            const Matrix basis = load_orthonormal_span(input);
            const SpreadSpec spec{m, delta, 2.0};
            const SpreadVerdict v = method == "exact"
                                        ? subspace_spread_exact(basis, spec)
                                        : spread_witness_search(basis, spec, restarts, seed);
            json cfg{{"input", input}, {"m", m}, {"delta", delta}, {"p", 2.0},
                     {"method", method}, {"restarts", restarts}};
            json res = verdict_to_json(v);
            res["m"] = m;
            res["delta"] = delta;
            res["p"] = 2.0;
            emit(envelope("spread-check", seed, cfg, res), output,
                 std::string("spread-check: ") + (v.is_spread ? "spread" : "not-spread") +
                     " ratio=" + std::to_string(v.achieved_ratio));
            return 0;
        }

        if (ct->parsed()) {
            if (calibrate) {
                if (n == 0) n = 16 * d * d;
                if (d == 0) throw ValidationError("certify --calibrate needs --d");
                std::vector<double> uppers;
                for (int s = 0; s < seeds; ++s)
                    uppers.push_back(
                        certify_distortion_24(gen_gaussian_null(n, d, seed + s), tol, seed + s).upper);
                std::sort(uppers.begin(), uppers.end());
                const std::size_t q_idx =
                    std::min(uppers.size() - 1,
                             static_cast<std::size_t>(std::ceil(0.999 * uppers.size())) - 1);
                json cfg{{"n", n}, {"d", d}, {"seeds", seeds}, {"tol", tol}};
                json res{{"quantile_999", uppers[q_idx]},
                         {"max", uppers.back()},
                         {"median", uppers[uppers.size() / 2]}};
                emit(envelope("certify-calibrate", seed, cfg, res), output,
                     "certify-calibrate: 0.999-quantile " + std::to_string(uppers[q_idx]));
                return 0;
            }
            if (input.empty()) throw ValidationError("certify needs --input");
            const Matrix a = read_matrix(input);
            const WellSpreadCertificate cert = certify_well_spread(a, delta, threshold, tol, seed);
            json cfg{{"input", input}, {"delta", delta}, {"threshold", threshold}, {"tol", tol}};
            json res;
            res["two_to_four_upper"] = cert.certificate.two_to_four.upper_bound;
            res["sigma_min"] = cert.certificate.sigma_min;
            res["distortion_upper"] = cert.distortion_upper;
            res["verdict"] = cert.yes ? "YES" : "NO";
            res["guaranteed_m"] = cert.guaranteed_m;
            res["delta"] = delta;
            res["threshold"] = threshold;
            res["method"] = to_string(SpreadMethod::distortion_certificate);
            emit(envelope("certify", seed, cfg, res), output,
                 std::string("certify: ") + (cert.yes ? "YES" : "NO") +
                     " distortion_upper=" + std::to_string(cert.distortion_upper) +
                     " guaranteed_m=" + std::to_string(cert.guaranteed_m));
            return 0;
        }

        if (kl->parsed()) {
            const SymGeomParams params{0, lambda, alpha, 1.0};
            const KlShift res = kl_shift(params, shift);
            json cfg{{"alpha", alpha}, {"lambda", lambda}, {"shift", shift}};
            json out{{"alpha", alpha}, {"lambda", lambda}, {"Delta", shift},
                     {"D", res.d_term},  {"Dprime", res.dprime_term}, {"kl", res.kl}};
            char buf[64];
            std::snprintf(buf, sizeof buf, "kl: %.12g", res.kl);
            emit(envelope("kl", seed, cfg, out), output, buf);
            return 0;
        }

        if (fano->parsed()) {
            const LowerBoundReport rep =
                lower_bound_pipeline(hard_tag_from_string(construction), n, d, alpha, gamma, pairs, seed);
            json cfg{{"construction", construction}, {"n", n},     {"d", d},
                     {"alpha", alpha},               {"gamma", gamma}, {"pairs", pairs}};
            json res;
            res["bound"] = rep.bound;
            res["target_met"] = rep.target_met;
            res["kl_budget_used"] = rep.kl_budget_used;
            res["kl_sampled_max"] = rep.kl_sampled_max;
            res["kl_analytic_cap"] = rep.kl_analytic_cap;
            res["analytic_binding"] = rep.analytic_binding;
            res["sigma_used"] = rep.sigma_used;
            res["separation"] = rep.separation;
            res["log_cardinality"] = rep.log_cardinality;
            res["pairs_sampled"] = rep.pairs_sampled;
            res["construction"] = rep.construction;
            res["gamma_target"] = rep.gamma_target;
            emit(envelope("fano", seed, cfg, res), output,
                 "fano: bound=" + std::to_string(rep.bound) + " target=" + std::to_string(gamma) +
                     (rep.target_met ? " met" : " NOT met"));
            return 0;
        }

        if (ld->parsed()) {
            LowDegParams params;
            params.n = n;
            params.d = d;
            params.rho = rho;
            params.sigma = nbr_sigma;
            params.degree = degree;
            params.degree_cap = cap;
            const LowDegMode ld_mode = mode == "exact-dp" ? LowDegMode::exact_dp : LowDegMode::paper_bound;
            const LowDegReport rep = lowdeg_norm(params, ld_mode);
            json cfg{{"n", n}, {"d", d}, {"rho", rho}, {"sigma", nbr_sigma},
                     {"degree", degree}, {"mode", mode}, {"cap", cap}};
            json res;
            res["total"] = rep.total;
            res["method"] = mode;
            res["sigma_regime_ok"] = rep.sigma_regime_ok;
            json table = json::array();
            for (const auto& c : rep.per_degree)
                table.push_back(json{{"k", c.k},
                                     {"sphere_moment", c.sphere_moment},
                                     {"inner_sum", c.inner_sum},
                                     {"contribution", c.contribution}});
            res["per_degree"] = table;
            char buf[64];
            std::snprintf(buf, sizeof buf, "lowdeg: total %.12g", rep.total);
            emit(envelope("lowdeg", seed, cfg, res), output, buf);
            return 0;
        }

        if (di->parsed()) {
            const DistinguishResult res = degree4_distinguish_experiment(n, d, {rho, nbr_sigma}, trials, seed);
            json cfg{{"n", n}, {"d", d}, {"rho", rho}, {"sigma", nbr_sigma}, {"trials", trials}};
            json out{{"mean_planted", res.mean_planted},
                     {"mean_null", res.mean_null},
                     {"pooled_std", res.pooled_std},
                     {"separation", res.separation},
                     {"trials", res.trials}};
            emit(envelope("distinguish", seed, cfg, out), output,
                 "distinguish: separation=" + std::to_string(res.separation));
            return 0;
        }

        if (rg->parsed()) {
            json cfg{{"mode", regress_mode}, {"n", n},         {"d", d},
                     {"alpha", alpha},       {"seeds", seeds}, {"estimator", estimator_name},
                     {"tuning", tuning}};
            json res;
            std::string summary;
            std::vector<double> per_seed;
            if (regress_mode == "hardness") {
                if (construction.empty()) throw ValidationError("regress hardness needs --construction");
                if (!(gamma > 0.0)) throw ValidationError("regress hardness needs --gamma");
                cfg["construction"] = construction;
                cfg["gamma"] = gamma;
                cfg["control"] = control;
                const HardnessResult hr =
                    hardness_experiment(hard_tag_from_string(construction), n, d, alpha, gamma,
                                        estimator_from_string(estimator_name), seeds, seed, control, tuning);
                res["mean_error"] = hr.mean_error;
                res["median_error"] = hr.median_error;
                res["std_error_of_mean"] = hr.std_error_of_mean;
                res["sigma_used"] = hr.sigma_used;
                res["design"] = hr.design;
                per_seed = hr.param_errors;
                summary = "regress hardness: mean_error=" + std::to_string(hr.mean_error) +
                          " design=" + hr.design;
            } else {
                // Trend run on a Gaussian design with the symmetric geometric noise.
                if (!(noise_lambda > 0.0))
                    noise_lambda = 2.0 * alpha * std::pow(static_cast<double>(d), -5.0);
                const SymGeomParams noise{0, noise_lambda, alpha, amplitude};
                const Matrix x = gen_gaussian_null(n, d, seed);
                per_seed.resize(static_cast<std::size_t>(seeds));
                for (int s = 0; s < seeds; ++s) {
                    Rng rng = Rng::stream(seed + static_cast<std::uint64_t>(s), "trend-beta");
                    const Vector beta = rng.normal_vector(d);
                    const Observation obs =
                        simulate_observation(x, beta, noise, seed + 977ull * (s + 1));
                    const Vector est = estimator_name == "least-squares"
                                           ? estimate_least_squares(x, obs.y)
                                       : estimator_name == "oracle-inlier-ls"
                                           ? estimate_oracle_inlier_ls(x, obs.y, obs.inliers)
                                           : estimate_huber(x, obs.y, tuning).estimate;
                    per_seed[static_cast<std::size_t>(s)] = (est - beta).squaredNorm();
                }
                std::vector<double> sorted = per_seed;
                std::sort(sorted.begin(), sorted.end());
                double mean = 0.0;
                for (double e : per_seed) mean += e;
                mean /= seeds;
                res["mean_error"] = mean;
                res["median_error"] = sorted[sorted.size() / 2];
                res["noise_lambda"] = noise_lambda;
                res["amplitude"] = amplitude;
                summary = "regress trend: median_error=" + std::to_string(sorted[sorted.size() / 2]);
            }
            res["per_seed"] = per_seed;
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path + ".tmp", std::ios::trunc);
                csv << "seed_index,param_error\n";
                for (std::size_t i = 0; i < per_seed.size(); ++i) csv << i << "," << per_seed[i] << "\n";
                csv.close();
                std::filesystem::rename(csv_path + ".tmp", csv_path);
            }
            emit(envelope("regress", seed, cfg, res), output, summary);
            return 0;
        }

        if (sp->parsed()) {
            const RationalMatrix a = read_rational_matrix(input);
            json cfg{{"input", input}, {"m", m}};
            json res;
            const SparkResult spark = compute_spark(a);
            res["spark"] = spark.spark ? json(*spark.spark) : json(nullptr);
            if (spark.witness) {
                json w = json::array();
                for (const auto& q : *spark.witness) w.push_back(q.get_str());
                res["witness"] = w;
            } else {
                res["witness"] = nullptr;
            }
            const mpq_class delta_q = reduction_delta(a);
            res["delta"] = delta_q.get_d();
            res["delta_rational"] = delta_q.get_str();
            if (sp->count("--m") > 0) {
                const ReductionCheck check = reduction_consistency_check(a, m);
                res["consistency"] = json{{"m", m},
                                          {"consistent", check.consistent},
                                          {"vacuous", check.vacuous},
                                          {"kernel_dimension", check.kernel_dimension},
                                          {"detail", check.detail}};
            }
            emit(envelope("spark", seed, cfg, res), output,
                 "spark: " + (spark.spark ? std::to_string(*spark.spark) : std::string("infinite")));
            return 0;
        }
    } catch (const NoConvergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
