//
// kronsvd: command line driver. Subcommands: decompose, tsvd, deblur,
// solve, bounds, reproduce. Exit codes: 0 success, 2 usage or input error,
// 3 numeric or capacity refusal. Tables are CSV written atomically; a rerun
// with identical flags and environment produces identical bytes.
//

#include "CLI11.hpp"

#include "kronsvd/approx_tsvd.hpp"
#include "kronsvd/baseline.hpp"
#include "kronsvd/bounds.hpp"
#include "kronsvd/config.hpp"
#include "kronsvd/decompose.hpp"
#include "kronsvd/dense_matrix.hpp"
#include "kronsvd/errors.hpp"
#include "kronsvd/image_io.hpp"
#include "kronsvd/kernels.hpp"
#include "kronsvd/kron.hpp"
#include "kronsvd/krylov.hpp"
#include "kronsvd/problems.hpp"
#include "kronsvd/regularization.hpp"
#include "kronsvd/serialize.hpp"
#include "kronsvd/svd.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

namespace {

using namespace kronsvd;

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

// ---------------------------------------------------------------- options

struct PsfOptions {
    std::string path;
    std::string gen;
    std::size_t size = 16;
    double sigma = 2.0;
    std::uint64_t seed = 1;
    double length = 9.0;
    double angle = 30.0;
    int center_row = -1;
    int center_col = -1;
};

struct ProblemOptions {
    std::string image;
    double noise = 0.0;
    std::uint64_t dseed = 1;
};

void add_psf_options(CLI::App* cmd, PsfOptions& o) {
    auto* file = cmd->add_option("--psf", o.path, "PSF file (.pgm or .csv)");
    auto* gen =
        cmd->add_option("--psf-gen", o.gen, "Generated PSF family")
            ->check(CLI::IsMember({"delta", "gaussian", "speckle", "motion"}));
    file->excludes(gen);
    gen->excludes(file);
    cmd->add_option("--psf-size", o.size, "Generated PSF size (equals image size)")
        ->capture_default_str();
    cmd->add_option("--psf-sigma", o.sigma, "Gaussian PSF width")
        ->capture_default_str();
    cmd->add_option("--psf-seed", o.seed, "Speckle PSF seed")
        ->capture_default_str();
    cmd->add_option("--motion-length", o.length, "Motion PSF length in pixels")
        ->capture_default_str();
    cmd->add_option("--motion-angle", o.angle, "Motion PSF angle in degrees")
        ->capture_default_str();
    cmd->add_option("--center-row", o.center_row, "PSF center row (file PSF)")
        ->needs(file);
    cmd->add_option("--center-col", o.center_col, "PSF center column (file PSF)")
        ->needs(file);
}

void add_problem_options(CLI::App* cmd, ProblemOptions& o) {
    cmd->add_option("--image", o.image,
                    "True image file (.pgm or .csv); default is the synthetic "
                    "satellite scene at the PSF size");
    cmd->add_option("--noise", o.noise, "Relative Gaussian noise level")
        ->capture_default_str();
    cmd->add_option("--dseed", o.dseed, "Noise realization seed")
        ->capture_default_str();
}

Psf resolve_psf(const PsfOptions& o) {
    if (!o.path.empty()) {
        DenseMatrix arr = load_image(o.path);
        const bool has_row = o.center_row >= 0;
        const bool has_col = o.center_col >= 0;
        if (has_row != has_col)
            throw Error("--center-row and --center-col must be given together");
        if (has_row)
            return make_psf(std::move(arr),
                            static_cast<std::size_t>(o.center_row),
                            static_cast<std::size_t>(o.center_col));
        return make_psf(std::move(arr));
    }
    if (o.gen == "delta") return make_delta_psf(o.size);
    if (o.gen == "gaussian") return make_gaussian_psf(o.size, o.sigma);
    if (o.gen == "speckle") return make_speckle_psf(o.size, o.seed);
    if (o.gen == "motion") return make_motion_psf(o.size, o.length, o.angle);
    throw Error("one of --psf or --psf-gen is required");
}

DenseMatrix resolve_image(const ProblemOptions& o, std::size_t n) {
    if (o.image.empty()) return make_satellite_image(n);
    DenseMatrix img = load_image(o.image);
    if (img.rows() != n || img.cols() != n)
        throw DimensionError("image must be " + std::to_string(n) + " x " +
                             std::to_string(n) + " to match the PSF");
    return img;
}

FilterKind parse_filter(const std::string& name) {
    if (name == "tsvd") return FilterKind::tsvd;
    if (name == "tikhonov") return FilterKind::tikhonov;
    if (name == "tsvd+tikhonov") return FilterKind::tsvd_plus_tikhonov;
    throw Error("unknown filter '" + name + "'");
}

// ---------------------------------------------------------------- manifest

struct Manifest {
    std::string text;

    void add(const std::string& key, const std::string& value) {
        text += key;
        text += ' ';
        text += value;
        text += '\n';
    }
    void add_count(const std::string& key, std::size_t v) {
        add(key, std::to_string(v));
    }
    void add_real(const std::string& key, double v) { add(key, format_double(v)); }

    void add_psf(const PsfOptions& o) {
        add("psf_file", o.path.empty() ? "-" : o.path);
        add("psf_gen", o.gen.empty() ? "-" : o.gen);
        add_count("psf_size", o.size);
        add_real("psf_sigma", o.sigma);
        add_count("psf_seed", o.seed);
        add_real("motion_length", o.length);
        add_real("motion_angle", o.angle);
        add("center_row", o.center_row < 0 ? "auto" : std::to_string(o.center_row));
        add("center_col", o.center_col < 0 ? "auto" : std::to_string(o.center_col));
    }
    void add_problem(const ProblemOptions& o) {
        add("image", o.image.empty() ? "satellite" : o.image);
        add_real("noise", o.noise);
        add_count("dseed", o.dseed);
    }

    void write(const std::string& out_dir) const {
        write_file_atomic(out_dir + "/run_manifest.txt", text);
    }
};

std::string prepare_out(const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    return out_dir;
}

// ---------------------------------------------------------------- helpers

double rel_error(const std::vector<double>& got, const std::vector<double>& want) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        num += (got[i] - want[i]) * (got[i] - want[i]);
        den += want[i] * want[i];
    }
    return std::sqrt(num / den);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

DenseMatrix block_of(const DenseMatrix& m, std::size_t r0, std::size_t r1,
                     std::size_t c0, std::size_t c1) {
    DenseMatrix out(r1 - r0, c1 - c0);
    for (std::size_t j = c0; j < c1; ++j)
        for (std::size_t i = r0; i < r1; ++i) out(i - r0, j - c0) = m(i, j);
    return out;
}

KroneckerSum decompose_for(const Psf& psf, std::size_t rank) {
    return rank == 0 ? psf_kron_sum(psf) : psf_kron_sum(psf, rank);
}

void write_solve_outputs(const std::string& out, const SolveReport& rep,
                         std::size_t n, std::size_t warnings) {
    std::string report = "iteration,residual\n";
    for (std::size_t i = 0; i < rep.residual_history.size(); ++i) {
        report += std::to_string(i + 1);
        report += ',';
        report += format_double(rep.residual_history[i]);
        report += '\n';
    }
    write_file_atomic(out + "/solve_report.csv", report);

    std::string metrics = "name,value\n";
    metrics += "iterations," + std::to_string(rep.iterations) + '\n';
    metrics += "converged," + std::string(rep.converged ? "1" : "0") + '\n';
    metrics += "initial_residual," + format_double(rep.initial_residual) + '\n';
    metrics += "final_residual," +
               format_double(rep.residual_history.empty()
                                 ? rep.initial_residual
                                 : rep.residual_history.back()) +
               '\n';
    metrics += "diagnostic," +
               (rep.diagnostic.empty() ? std::string("-") : rep.diagnostic) + '\n';
    metrics += "precond_warnings," + std::to_string(warnings) + '\n';
    write_file_atomic(out + "/metrics.csv", metrics);

    save_csv_matrix(out + "/solution.csv", unvec(rep.x, n));
    save_pgm(out + "/solution.pgm", unvec(rep.x, n));
}

// ---------------------------------------------------------------- decompose

struct DecomposeOptions {
    PsfOptions psf;
    std::size_t rank = 0;
    std::string out = "out";
};

int cmd_decompose(const DecomposeOptions& o) {
    const Psf psf = resolve_psf(o.psf);
    const KroneckerSum ks = decompose_for(psf, o.rank);
    const std::size_t r = ks.terms.size();

    const std::string out = prepare_out(o.out);
    Manifest man;
    man.add("command", "decompose");
    man.add_psf(o.psf);
    man.add_count("rank", o.rank);
    man.add_count("terms", r);
    man.add_count("kron_rank_full", ks.kron_rank_full);
    man.add_count("materialization_cap", materialization_cap());
    man.write(out);

    save_kron_sum(out + "/kron_sum", ks);
    save_csv_vector(out + "/weights.csv", ks.weights);

    const double decay = r > 1 ? ks.weights[1] / ks.weights[0] : 0.0;
    std::printf("kron rank %zu of %zu\n", r, ks.kron_rank_full);
    std::printf("weight decay %s\n", format_double(decay).c_str());
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

// ---------------------------------------------------------------- tsvd

struct TsvdOptions {
    PsfOptions psf;
    std::size_t k = 0;
    std::size_t rank = 0;
    std::string method = "reordered";
    bool oracle = false;
    std::string out = "out";
};

int cmd_tsvd(const TsvdOptions& o) {
    const Psf psf = resolve_psf(o.psf);
    const KroneckerSum ks = decompose_for(psf, o.rank);
    const std::size_t n2 = ks.n * ks.n;
    if (o.k == 0 || o.k > n2)
        throw Error("--k must be in [1, " + std::to_string(n2) + "]");

    const std::string out = prepare_out(o.out);
    Manifest man;
    man.add("command", "tsvd");
    man.add_psf(o.psf);
    man.add_count("k", o.k);
    man.add_count("rank", o.rank);
    man.add("method", o.method);
    man.add("oracle", o.oracle ? "1" : "0");
    man.add_count("materialization_cap", materialization_cap());
    man.write(out);

    std::vector<double> sigma(o.k);
    if (o.method == "reordered") {
        const ImplicitTsvd tsvd = build(ks, o.k);
        save_implicit_tsvd(out + "/tsvd", tsvd);
        sigma = tsvd.s_t;
    } else {
        const BaselineTsvd b = baseline_build(ks, factor_svds(ks.terms[0]));
        save_baseline_tsvd(out + "/baseline", b);
        for (std::size_t i = 0; i < o.k; ++i)
            sigma[i] = b.sigma_hat[b.perm_by_magnitude[i]];
    }
    save_csv_vector(out + "/sigma.csv", sigma);

    if (o.oracle) {
        const DenseSvdTriple oracle = dense_svd(kron_sum_dense(ks));
        std::string table = "index,sigma_approx,sigma_oracle,rel_error\n";
        for (std::size_t i = 0; i < o.k; ++i) {
            const double approx = std::abs(sigma[i]);
            const double truth = oracle.s[i];
            const double rel =
                truth > 0.0 ? std::abs(approx - truth) / truth : approx;
            table += std::to_string(i) + ',' + format_double(sigma[i]) + ',' +
                     format_double(truth) + ',' + format_double(rel) + '\n';
        }
        write_file_atomic(out + "/oracle_error.csv", table);
    }

    std::printf("method %s, k %zu, leading value %s\n", o.method.c_str(), o.k,
                format_double(std::abs(sigma[0])).c_str());
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

// ---------------------------------------------------------------- deblur

struct DeblurOptions {
    PsfOptions psf;
    ProblemOptions problem;
    std::size_t k = 0;
    std::size_t rank = 0;
    std::string filter = "tsvd";
    double alpha = 0.0;
    std::size_t ktrunc = 0;
    std::string method = "reordered";
    std::string out = "out";
};

int cmd_deblur(const DeblurOptions& o) {
    const Psf psf = resolve_psf(o.psf);
    const std::size_t n = psf.array.rows();
    const std::size_t n2 = n * n;
    const DenseMatrix x_true = resolve_image(o.problem, n);
    const BlurProblem prob =
        make_problem(psf, x_true, o.problem.noise, o.problem.dseed);
    const KroneckerSum ks = decompose_for(psf, o.rank);
    const std::size_t k = o.k == 0 ? n2 : o.k;

    const std::string out = prepare_out(o.out);
    Manifest man;
    man.add("command", "deblur");
    man.add_psf(o.psf);
    man.add_problem(o.problem);
    man.add_count("k", k);
    man.add_count("rank", o.rank);
    man.add("filter", o.filter);
    man.add_real("alpha", o.alpha);
    man.add_count("ktrunc", o.ktrunc);
    man.add("method", o.method);
    man.add_count("materialization_cap", materialization_cap());
    man.write(out);

    const FilterSpec spec{parse_filter(o.filter), o.alpha, o.ktrunc};
    std::vector<double> x;
    if (o.method == "reordered") {
        const ImplicitTsvd tsvd = build(ks, k);
        x = filtered_solve(*make_spectral(tsvd), prob.d, spec);
    } else if (o.method == "baseline") {
        const BaselineTsvd b = baseline_build(ks, factor_svds(ks.terms[0]));
        x = filtered_solve(*make_spectral(b), prob.d, spec);
    } else {
        const DenseSvdTriple oracle = dense_svd(kron_sum_dense(ks));
        x = filtered_solve(*make_spectral(oracle), prob.d, spec);
    }

    const DenseMatrix restored = unvec(x, n);
    save_pgm(out + "/restored.pgm", restored);
    save_csv_matrix(out + "/restored.csv", restored);

    const std::vector<double> truth = vec(x_true);
    const double blurred_err = rel_error(prob.d, truth);
    const double restored_err = rel_error(x, truth);
    std::string metrics = "name,value\n";
    metrics += "blurred_rel_error," + format_double(blurred_err) + '\n';
    metrics += "restored_rel_error," + format_double(restored_err) + '\n';
    write_file_atomic(out + "/metrics.csv", metrics);

    std::printf("blurred error %s, restored error %s\n",
                format_double(blurred_err).c_str(),
                format_double(restored_err).c_str());
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
    PsfOptions psf;
    ProblemOptions problem;
    std::string precond = "none";
    std::size_t k = 0;
    std::size_t rank = 0;
    double alpha = 1e-3;
    double tol = 1e-6;
    std::size_t maxit = 200;
    std::string out = "out";
};

int cmd_solve(const SolveOptions& o) {
    const Psf psf = resolve_psf(o.psf);
    const std::size_t n = psf.array.rows();
    const DenseMatrix x_true = resolve_image(o.problem, n);
    const BlurProblem prob =
        make_problem(psf, x_true, o.problem.noise, o.problem.dseed);
    const LinearOperator op = make_blur_operator(psf, n);

    const std::string out = prepare_out(o.out);
    Manifest man;
    man.add("command", "solve");
    man.add_psf(o.psf);
    man.add_problem(o.problem);
    man.add("precond", o.precond);
    man.add_count("k", o.k);
    man.add_count("rank", o.rank);
    man.add_real("alpha", o.alpha);
    man.add_real("tol", o.tol);
    man.add_count("maxit", o.maxit);
    man.add_count("materialization_cap", materialization_cap());
    man.write(out);

    SolveReport rep;
    std::size_t warnings = 0;
    if (o.precond == "none") {
        rep = cgls(op, prob.d, o.alpha, o.tol, o.maxit);
    } else {
        if (o.k == 0)
            throw Error("--k must be positive for preconditioned solves");
        const KroneckerSum ks = decompose_for(psf, o.rank);
        if (o.precond == "reordered") {
            const ImplicitTsvd tsvd = build(ks, o.k);
            rep = pcgls(op, prob.d, o.alpha, make_preconditioner(tsvd, o.alpha),
                        o.tol, o.maxit);
        } else {
            const BaselineTsvd b = baseline_build(ks, factor_svds(ks.terms[0]));
            rep = pcgls(op, prob.d, o.alpha,
                        make_preconditioner(b, o.k, o.alpha, &warnings), o.tol,
                        o.maxit);
            if (warnings)
                std::fprintf(stderr,
                             "warning: %zu nonpositive baseline values skipped\n",
                             warnings);
        }
    }

    write_solve_outputs(out, rep, n, warnings);
    std::printf("iterations %zu, converged %d\n", rep.iterations,
                rep.converged ? 1 : 0);
    if (!rep.diagnostic.empty())
        std::printf("diagnostic %s\n", rep.diagnostic.c_str());
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

// ---------------------------------------------------------------- bounds

// Bound sweep in the truncate-down regime: one factorization at k_max, one
// gap evaluation, then every effective rank j re-partitions the hat-basis
// residual at j. The leading k_max columns of U_hat are ordered by the core
// SVD, so truncating them yields the effective rank-j operator directly.
std::string bounds_sweep_csv(const KroneckerSum& ks, const std::vector<double>& d,
                             std::size_t kmin, std::size_t kmax,
                             std::size_t kstep) {
    const std::size_t n2 = ks.n * ks.n;
    if (kmax == 0 || kmax > n2)
        throw Error("--kmax must be in [1, " + std::to_string(n2) + "]");
    if (kmin == 0 || kmin > kmax) throw Error("--kmin must be in [1, kmax]");
    if (kstep == 0) throw Error("--kstep must be positive");

    const DenseMatrix k_dense = kron_sum_dense(ks);
    const ImplicitTsvd tsvd = build(ks, kmax);
    const DenseSvdTriple oracle = dense_svd(k_dense);
    const GapBlocks gap = gap_blocks(k_dense, tsvd);
    const DenseMatrix u_hat = materialize_u_hat(tsvd);
    const DenseMatrix v_hat = materialize_v_hat(tsvd);

    // Hat-basis view of K: approximate values on the diagonal, gap blocks off
    // the leading k_max square.
    DenseMatrix hat(n2, n2);
    for (std::size_t i = 0; i < kmax; ++i) hat(i, i) = tsvd.s_t[i];
    for (std::size_t i = kmax; i < n2; ++i)
        hat(i, i) = gap.sigma0_hat[i - kmax];
    for (std::size_t q = kmax; q < n2; ++q)
        for (std::size_t p = 0; p < kmax; ++p)
            hat(p, q) += gap.w12_hat(p, q - kmax);
    for (std::size_t q = 0; q < kmax; ++q)
        for (std::size_t p = kmax; p < n2; ++p)
            hat(p, q) += gap.w21_hat(p - kmax, q);
    for (std::size_t q = kmax; q < n2; ++q)
        for (std::size_t p = kmax; p < n2; ++p)
            hat(p, q) += gap.w22(p - kmax, q - kmax);

    auto true_distance = [&](const DenseMatrix& full, const DenseMatrix& hat_side,
                             std::size_t j) {
        DenseMatrix lead = block_of(full, 0, n2, 0, j);
        const DenseMatrix hj = block_of(hat_side, 0, n2, 0, j);
        const DenseMatrix g = matmul(hj, lead, true, false);
        const DenseMatrix proj = matmul(hj, g);
        kernels::ops().axpy(lead.data(), -1.0, proj.data(), lead.size());
        return spectral_norm(lead);
    };

    const std::vector<double> dn(d.begin(), d.end());
    std::string csv =
        "k,true_signal,signal_bound,true_noise,noise_bound,true_pinv,"
        "pinv_bound,true_sol,sol_bound,signal_valid,noise_valid,pinv_valid,"
        "sol_valid\n";

    for (std::size_t j = kmin; j <= kmax; j += kstep) {
        const double sigma_j = oracle.s[j - 1];
        const double sigma_hat_j = tsvd.s_t[j - 1];

        GapBlocks gj;
        gj.n2 = n2;
        gj.k = j;
        gj.w12_hat = block_of(gap.w12_hat, 0, j, 0, gap.w12_hat.cols());
        gj.w21_hat = block_of(gap.w21_hat, 0, gap.w21_hat.rows(), 0, j);
        gj.w22 = block_of(hat, j, n2, j, n2);
        gj.sigma0_hat.assign(n2 - j, 0.0);

        const BoundValue sb = signal_subspace_bound(gj, sigma_j);
        const BoundValue nb = noise_subspace_bound(gj, sigma_j);
        const double true_signal = true_distance(oracle.u, u_hat, j);
        const double true_noise = true_distance(oracle.v, v_hat, j);
        const double w21_norm = spectral_norm(gj.w21_hat);

        BoundValue pb{0.0, false};
        double true_pinv = 0.0;
        if (sigma_hat_j > 0.0) {
            pb.value = pinv_bound(oracle.s[0], sigma_hat_j, true_noise, w21_norm);
            pb.valid = true;
            DenseMatrix pinv_hat(n2, n2);
            std::vector<double> e(n2, 0.0);
            for (std::size_t col = 0; col < n2; ++col) {
                e[col] = 1.0;
                const std::vector<double> x = tsvd_pinv_apply(tsvd, e, j);
                std::copy(x.begin(), x.end(), pinv_hat.col(col));
                e[col] = 0.0;
            }
            DenseMatrix v_scaled(n2, j);
            for (std::size_t c = 0; c < j; ++c) {
                const double inv = 1.0 / oracle.s[c];
                for (std::size_t i = 0; i < n2; ++i)
                    v_scaled(i, c) = inv * oracle.v(i, c);
            }
            const DenseMatrix u_lead = block_of(oracle.u, 0, n2, 0, j);
            const DenseMatrix pinv_true = matmul(v_scaled, u_lead, false, true);
            kernels::ops().axpy(pinv_hat.data(), -1.0, pinv_true.data(),
                                pinv_hat.size());
            true_pinv = spectral_norm(pinv_hat) * sigma_j;
        }

        BoundValue slb{0.0, false};
        double true_sol = 0.0;
        if (sigma_j > 0.0 && sigma_hat_j > 0.0) {
            const std::vector<double> x_oracle = dense_tsvd_solution(oracle, dn, j);
            const std::vector<double> x_hat = tsvd_pinv_apply(tsvd, dn, j);
            true_sol = rel_error(x_hat, x_oracle);
            std::vector<double> r = matvec(k_dense, x_oracle);
            kernels::ops().scal(r.data(), -1.0, r.size());
            kernels::ops().axpy(r.data(), 1.0, dn.data(), r.size());
            slb = solution_bound(oracle.s[0], sigma_j, sigma_hat_j, true_noise,
                                 w21_norm, norm2(r), norm2(dn));
        }

        csv += std::to_string(j) + ',';
        csv += format_double(true_signal) + ',' + format_double(sb.value) + ',';
        csv += format_double(true_noise) + ',' + format_double(nb.value) + ',';
        csv += format_double(true_pinv) + ',' + format_double(pb.value) + ',';
        csv += format_double(true_sol) + ',' + format_double(slb.value) + ',';
        csv += std::string(sb.valid ? "1" : "0") + ',';
        csv += std::string(nb.valid ? "1" : "0") + ',';
        csv += std::string(pb.valid ? "1" : "0") + ',';
        csv += std::string(slb.valid ? "1" : "0") + '\n';
    }
    return csv;
}

struct BoundsOptions {
    PsfOptions psf;
    ProblemOptions problem;
    std::size_t kmax = 0;
    std::size_t kmin = 1;
    std::size_t kstep = 1;
    std::size_t rank = 0;
    std::string out = "out";
};

int cmd_bounds(const BoundsOptions& o) {
    const Psf psf = resolve_psf(o.psf);
    const std::size_t n = psf.array.rows();
    const DenseMatrix x_true = resolve_image(o.problem, n);
    const BlurProblem prob =
        make_problem(psf, x_true, o.problem.noise, o.problem.dseed);
    const KroneckerSum ks = decompose_for(psf, o.rank);

    const std::string out = prepare_out(o.out);
    Manifest man;
    man.add("command", "bounds");
    man.add_psf(o.psf);
    man.add_problem(o.problem);
    man.add_count("kmin", o.kmin);
    man.add_count("kmax", o.kmax);
    man.add_count("kstep", o.kstep);
    man.add_count("rank", o.rank);
    man.add_count("materialization_cap", materialization_cap());
    man.write(out);

    const std::string csv =
        bounds_sweep_csv(ks, prob.d, o.kmin, o.kmax, o.kstep);
    write_file_atomic(out + "/bounds.csv", csv);

    std::size_t rows = 0, invalid = 0;
    for (std::size_t pos = csv.find('\n'); pos != std::string::npos;
         pos = csv.find('\n', pos + 1))
        ++rows;
    for (std::size_t pos = 0; (pos = csv.find(",0,", pos)) != std::string::npos;
         ++pos)
        ++invalid;
    std::printf("swept %zu ranks\n", rows ? rows - 1 : 0);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

// ---------------------------------------------------------------- reproduce

struct ReproduceOptions {
    std::string out = "out";
};

int cmd_reproduce(const ReproduceOptions& o) {
    const std::string out = prepare_out(o.out);
    Manifest man;
    man.add("command", "reproduce");
    man.add_count("materialization_cap", materialization_cap());
    man.write(out);
    std::string summary = "name,value\n";

    {
        const Psf psf = make_motion_psf(16, 9.0, 30.0);
        const KroneckerSum ks = psf_kron_sum(psf);
        const std::size_t k = 64, top = 32;
        const ImplicitTsvd tsvd = build(ks, k);
        const BaselineTsvd base = baseline_build(ks, factor_svds(ks.terms[0]));
        const DenseSvdTriple oracle = dense_svd(kron_sum_dense(ks));

        std::string table =
            "index,sigma_oracle,sigma_reordered,sigma_baseline,"
            "rel_reordered,rel_baseline\n";
        std::vector<double> rel_re, rel_ba;
        for (std::size_t i = 0; i < k; ++i) {
            const double truth = oracle.s[i];
            const double re = tsvd.s_t[i];
            const double ba = std::abs(base.sigma_hat[base.perm_by_magnitude[i]]);
            const double er = std::abs(re - truth) / truth;
            const double eb = std::abs(ba - truth) / truth;
            if (i < top) {
                rel_re.push_back(er);
                rel_ba.push_back(eb);
            }
            table += std::to_string(i) + ',' + format_double(truth) + ',' +
                     format_double(re) + ',' + format_double(ba) + ',' +
                     format_double(er) + ',' + format_double(eb) + '\n';
        }
        write_file_atomic(out + "/sv_accuracy.csv", table);
        summary += "sv_median_rel_reordered," + format_double(median(rel_re)) + '\n';
        summary += "sv_median_rel_baseline," + format_double(median(rel_ba)) + '\n';
    }

    {
        const std::size_t n = 32;
        const Psf psf = make_speckle_psf(n, 11);
        const DenseMatrix x_true = make_satellite_image(n);
        const BlurProblem prob = make_problem(psf, x_true, 0.02, 3);
        const KroneckerSum ks = psf_kron_sum(psf);
        const FilterSpec spec{FilterKind::tsvd_plus_tikhonov, 1e-3, 0};

        const ImplicitTsvd tsvd = build(ks, 100);
        const std::vector<double> x = filtered_solve(*make_spectral(tsvd), prob.d, spec);
        const DenseSvdTriple oracle = dense_svd(kron_sum_dense(ks));
        FilterSpec oracle_spec = spec;
        oracle_spec.effective_truncation = 100;
        const std::vector<double> x_oracle =
            filtered_solve(*make_spectral(oracle), prob.d, oracle_spec);

        const std::vector<double> truth = vec(x_true);
        const double blurred = rel_error(prob.d, truth);
        const double restored = rel_error(x, truth);
        const double oracle_err = rel_error(x_oracle, truth);
        std::string table = "name,value\n";
        table += "blurred_rel_error," + format_double(blurred) + '\n';
        table += "restored_rel_error," + format_double(restored) + '\n';
        table += "oracle_rel_error," + format_double(oracle_err) + '\n';
        table += "restored_over_blurred," + format_double(restored / blurred) + '\n';
        table += "restored_over_oracle," + format_double(restored / oracle_err) + '\n';
        write_file_atomic(out + "/restoration.csv", table);
        summary += "restored_over_blurred," + format_double(restored / blurred) + '\n';
        summary += "restored_over_oracle," + format_double(restored / oracle_err) + '\n';

        save_pgm(out + "/restored.pgm", unvec(x, n));
    }

    {
        const std::size_t n = 32, k = 250, maxit = 3000;
        const double alpha = 1e-3, tol = 1e-6;
        const Psf psf = make_speckle_psf(n, 11);
        const DenseMatrix x_true = make_satellite_image(n);
        const BlurProblem prob = make_problem(psf, x_true, 0.01, 3);
        const LinearOperator op = make_blur_operator(psf, n);
        const KroneckerSum ks = psf_kron_sum(psf);

        const SolveReport none = cgls(op, prob.d, alpha, tol, maxit);
        const ImplicitTsvd tsvd = build(ks, k);
        const SolveReport reordered = pcgls(
            op, prob.d, alpha, make_preconditioner(tsvd, alpha), tol, maxit);
        std::size_t warnings = 0;
        const BaselineTsvd base = baseline_build(ks, factor_svds(ks.terms[0]));
        const SolveReport baseline =
            pcgls(op, prob.d, alpha, make_preconditioner(base, k, alpha, &warnings),
                  tol, maxit);

        std::string table = "method,iterations,converged\n";
        table += "none," + std::to_string(none.iterations) + ',' +
                 (none.converged ? "1" : "0") + '\n';
        table += "baseline," + std::to_string(baseline.iterations) + ',' +
                 (baseline.converged ? "1" : "0") + '\n';
        table += "reordered," + std::to_string(reordered.iterations) + ',' +
                 (reordered.converged ? "1" : "0") + '\n';
        write_file_atomic(out + "/preconditioning.csv", table);
        summary += "iterations_none," + std::to_string(none.iterations) + '\n';
        summary += "iterations_baseline," + std::to_string(baseline.iterations) + '\n';
        summary += "iterations_reordered," + std::to_string(reordered.iterations) + '\n';
    }

    {
        const std::size_t n = 8;
        const Psf psf = make_speckle_psf(n, 11);
        const DenseMatrix x_true = make_satellite_image(n);
        const BlurProblem prob = make_problem(psf, x_true, 0.01, 3);
        const KroneckerSum ks = psf_kron_sum(psf);
        const std::string csv = bounds_sweep_csv(ks, prob.d, 2, 32, 2);
        write_file_atomic(out + "/bounds.csv", csv);

        std::size_t valid_rows = 0, total_rows = 0;
        std::size_t pos = csv.find('\n') + 1;
        while (pos < csv.size()) {
            const std::size_t eol = csv.find('\n', pos);
            const std::string line = csv.substr(pos, eol - pos);
            ++total_rows;
            if (line.size() >= 7 && line.substr(line.size() - 7) == "1,1,1,1")
                ++valid_rows;
            pos = eol + 1;
        }
        summary += "bounds_rows," + std::to_string(total_rows) + '\n';
        summary += "bounds_all_valid_rows," + std::to_string(valid_rows) + '\n';
    }

    write_file_atomic(out + "/summary.csv", summary);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

} // namespace

// ---------------------------------------------------------------- main

int main(int argc, char** argv) {
    if (const char* cap = std::getenv("KRONSVD_CAP")) {
        const std::string raw = cap;
        std::size_t value = 0;
        const auto res =
            std::from_chars(raw.data(), raw.data() + raw.size(), value);
        if (res.ec != std::errc() || res.ptr != raw.data() + raw.size() ||
            value == 0) {
            std::fprintf(stderr, "kronsvd: bad KRONSVD_CAP '%s'\n", cap);
            return kExitInput;
        }
        set_materialization_cap(value);
    }

    CLI::App app{
        "Approximate truncated SVDs of Kronecker-structured blur operators"};
    app.require_subcommand(1);

    DecomposeOptions dec;
    CLI::App* dec_cmd = app.add_subcommand(
        "decompose", "Kronecker sum decomposition of a PSF blur operator");
    add_psf_options(dec_cmd, dec.psf);
    dec_cmd->add_option("--rank", dec.rank, "Kept Kronecker terms (0 = full)")
        ->capture_default_str();
    dec_cmd->add_option("--out", dec.out, "Output directory")
        ->capture_default_str();

    TsvdOptions tsv;
    CLI::App* tsv_cmd =
        app.add_subcommand("tsvd", "Build and serialize a truncated SVD");
    add_psf_options(tsv_cmd, tsv.psf);
    tsv_cmd->add_option("--k", tsv.k, "Truncation index")->required();
    tsv_cmd->add_option("--rank", tsv.rank, "Kept Kronecker terms (0 = full)")
        ->capture_default_str();
    tsv_cmd->add_option("--method", tsv.method, "Factorization method")
        ->check(CLI::IsMember({"reordered", "baseline"}))
        ->capture_default_str();
    tsv_cmd->add_flag("--oracle", tsv.oracle,
                      "Also emit per-index relative error vs the dense oracle");
    tsv_cmd->add_option("--out", tsv.out, "Output directory")
        ->capture_default_str();

    DeblurOptions deb;
    CLI::App* deb_cmd =
        app.add_subcommand("deblur", "Filtered restoration of a blurred image");
    add_psf_options(deb_cmd, deb.psf);
    add_problem_options(deb_cmd, deb.problem);
    deb_cmd->add_option("--k", deb.k, "Truncation index (0 = full)")
        ->capture_default_str();
    deb_cmd->add_option("--rank", deb.rank, "Kept Kronecker terms (0 = full)")
        ->capture_default_str();
    deb_cmd->add_option("--filter", deb.filter, "Spectral filter")
        ->check(CLI::IsMember({"tsvd", "tikhonov", "tsvd+tikhonov"}))
        ->capture_default_str();
    deb_cmd->add_option("--alpha", deb.alpha, "Tikhonov parameter")
        ->capture_default_str();
    deb_cmd->add_option("--ktrunc", deb.ktrunc,
                        "Filter truncation (0 = full spectrum)")
        ->capture_default_str();
    deb_cmd->add_option("--method", deb.method, "Spectral view")
        ->check(CLI::IsMember({"reordered", "baseline", "oracle"}))
        ->capture_default_str();
    deb_cmd->add_option("--out", deb.out, "Output directory")
        ->capture_default_str();

    SolveOptions sol;
    CLI::App* sol_cmd = app.add_subcommand(
        "solve", "(P)CGLS on the damped normal equations");
    add_psf_options(sol_cmd, sol.psf);
    add_problem_options(sol_cmd, sol.problem);
    sol_cmd->add_option("--precond", sol.precond, "Preconditioner")
        ->check(CLI::IsMember({"none", "baseline", "reordered"}))
        ->capture_default_str();
    sol_cmd->add_option("--k", sol.k, "Preconditioner truncation index")
        ->capture_default_str();
    sol_cmd->add_option("--rank", sol.rank, "Kept Kronecker terms (0 = full)")
        ->capture_default_str();
    sol_cmd->add_option("--alpha", sol.alpha, "Tikhonov damping")
        ->capture_default_str();
    sol_cmd->add_option("--tol", sol.tol, "Relative convergence tolerance")
        ->capture_default_str();
    sol_cmd->add_option("--maxit", sol.maxit, "Iteration limit")
        ->capture_default_str();
    sol_cmd->add_option("--out", sol.out, "Output directory")
        ->capture_default_str();

    BoundsOptions bnd;
    CLI::App* bnd_cmd = app.add_subcommand(
        "bounds", "A-posteriori bound sweep against the dense oracle");
    add_psf_options(bnd_cmd, bnd.psf);
    add_problem_options(bnd_cmd, bnd.problem);
    bnd_cmd->add_option("--kmax", bnd.kmax, "Factorization truncation index")
        ->required();
    bnd_cmd->add_option("--kmin", bnd.kmin, "Smallest effective rank")
        ->capture_default_str();
    bnd_cmd->add_option("--kstep", bnd.kstep, "Effective rank stride")
        ->capture_default_str();
    bnd_cmd->add_option("--rank", bnd.rank, "Kept Kronecker terms (0 = full)")
        ->capture_default_str();
    bnd_cmd->add_option("--out", bnd.out, "Output directory")
        ->capture_default_str();

    ReproduceOptions rep;
    CLI::App* rep_cmd = app.add_subcommand(
        "reproduce", "Desk-scale experiment pipeline with a summary table");
    rep_cmd->add_option("--out", rep.out, "Output directory")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (dec_cmd->parsed()) return cmd_decompose(dec);
        if (tsv_cmd->parsed()) return cmd_tsvd(tsv);
        if (deb_cmd->parsed()) return cmd_deblur(deb);
        if (sol_cmd->parsed()) return cmd_solve(sol);
        if (bnd_cmd->parsed()) return cmd_bounds(bnd);
        if (rep_cmd->parsed()) return cmd_reproduce(rep);
    } catch (const CapacityError& e) {
        std::fprintf(stderr, "kronsvd: %s\n", e.what());
        return kExitNumeric;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "kronsvd: %s\n", e.what());
        return kExitNumeric;
    } catch (const Error& e) {
        std::fprintf(stderr, "kronsvd: %s\n", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "kronsvd: %s\n", e.what());
        return kExitNumeric;
    }
    return 0;
}
