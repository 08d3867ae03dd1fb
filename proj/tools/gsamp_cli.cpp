// Batch front end: analyze, dual, reconstruct, spline-demo, pr-check, lca-demo.
// Exit codes: 0 recoverable / pass, 1 not recoverable / fail, 2 bad input.

#include "gsamp/gsamp.hpp"
#include "gsamp/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <random>

namespace {

using namespace gsamp;
namespace fs = std::filesystem;
using io::format_double;

enum Exit : int { kOk = 0, kFail = 1, kBadInput = 2 };

struct Options {
  std::string input;
  std::string out;
  double tol = 1e-10;
  int grid = 0;
  std::string u_matrix;
  std::string samples;
  std::string truth;
  int half_length = 32;
  int K = 3;
  int p = 4;
  std::uint64_t seed = 7;
};

std::string fmt(Complex c) {
  if (c.imag() == 0.0) return format_double(c.real());
  return format_double(c.real()) + (std::signbit(c.imag()) ? " - " : " + ") + format_double(std::abs(c.imag())) + "i";
}

void print_singular_values(const RVector& sv) {
  std::cout << "singular values:";
  for (Eigen::Index i = 0; i < sv.size(); ++i) std::cout << ' ' << format_double(sv(i));
  std::cout << '\n';
}

std::string out_stem(const Options& opt, const char* fallback) {
  if (opt.out.empty()) return fallback;
  fs::path p(opt.out);
  if (p.has_extension()) p.replace_extension();
  return p.string();
}

io::ProblemFile require_input(const Options& opt) {
  if (opt.input.empty()) throw io::SchemaError("--input is required for this command");
  return io::load_problem(opt.input);
}

std::optional<CMatrix> load_u_matrix(const Options& opt, Eigen::Index rows, Eigen::Index cols) {
  if (opt.u_matrix.empty()) return std::nullopt;
  std::ifstream in(opt.u_matrix);
  if (!in) throw io::SchemaError("cannot open " + opt.u_matrix);
  io::json j;
  try {
    j = io::json::parse(in);
  } catch (const io::json::exception& e) {
    throw io::SchemaError(std::string("U matrix: invalid JSON: ") + e.what());
  }
  if (j.is_object()) j = io::detail::field(j, "U");
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw io::SchemaError("U matrix must have " + std::to_string(rows) + " rows");
  }
  CMatrix U(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) U.row(i) = io::detail::as_vector(j[static_cast<std::size_t>(i)], cols, "U").transpose();
  return U;
}

// ---------------------------------------------------------------------------
// cyclic model

struct CyclicSetup {
  cyclic::CyclicSubspace space;
  cyclic::SamplingScheme scheme;
};

CyclicSetup cyclic_setup(const io::CyclicProblem& pb) {
  cyclic::CyclicSubspace space(pb.op, pb.generators, pb.orders);
  cyclic::SamplingScheme scheme(pb.samplers, pb.r, space);
  return {std::move(space), std::move(scheme)};
}

int analyze_cyclic(const io::CyclicProblem& pb, const Options& opt) {
  const auto setup = cyclic_setup(pb);
  const auto R = cyclic::build_sample_matrix(setup.space, setup.scheme);
  const auto rep = cyclic::check_rank(R, opt.tol);
  const auto& lay = R.layout;
  std::cout << "model cyclic\n";
  std::cout << "N = " << lay.lcm << ", r = " << lay.r << ", ell = " << lay.ell << ", s = " << lay.s
            << ", L = " << lay.orders.size() << '\n';
  std::cout << "sample matrix " << R.entries.rows() << " x " << R.entries.cols() << '\n';
  print_singular_values(rep.singular_values);
  if (rep.full_rank) {
    std::cout << "frame bounds: " << format_double(rep.lower_frame_bound()) << ' '
              << format_double(rep.upper_frame_bound()) << '\n';
    std::cout << "rank " << rep.rank << '/' << rep.columns << ", recoverable\n";
    return kOk;
  }
  std::cout << "rank " << rep.rank << '/' << rep.columns << ", not recoverable\n";
  return kFail;
}

int dual_cyclic(const io::CyclicProblem& pb, const Options& opt) {
  const auto setup = cyclic_setup(pb);
  const auto R = cyclic::build_sample_matrix(setup.space, setup.scheme);
  const auto rank = cyclic::check_rank(R, opt.tol);
  if (!rank.full_rank) {
    std::cout << "rank " << rank.rank << '/' << rank.columns << ", not recoverable\n";
    return kFail;
  }
  const auto U = load_u_matrix(opt, R.entries.cols(), R.entries.rows());
  const auto hs = cyclic::structurize_left_inverse(R, cyclic::left_inverse(R, U, opt.tol), 1e-8, opt.tol);
  const auto basis = cyclic::reconstruction_vectors(setup.space, hs);
  const int total = R.layout.total();
  std::cout << "left-inverse residual " << format_double(max_abs(hs.entries * R.entries - CMatrix::Identity(total, total)))
            << '\n';
  const std::string stem = out_stem(opt, "dual");
  for (std::size_t j = 0; j < basis.vectors.size(); ++j) {
    const std::string path = stem + "_c" + std::to_string(j + 1) + ".csv";
    io::write_csv(path, basis.vectors[j]);
    std::cout << "wrote " << path << '\n';
  }
  if (R.entries.rows() == R.entries.cols()) {
    const auto& lay = R.layout;
    std::cout << "interpolation table (row j: samples L_j' c_j(r n), columns (j', n))\n";
    double worst = 0.0;
    for (int j = 0; j < lay.s; ++j) {
      const CVector smp = cyclic::take_samples(setup.space, setup.scheme, basis.vectors[static_cast<std::size_t>(j)]);
      std::cout << "  c" << j + 1 << ':';
      for (Eigen::Index i = 0; i < smp.size(); ++i) {
        const double want = i == j * lay.ell ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(smp(i) - want));
        std::cout << ' ' << std::fixed << std::setprecision(6) << smp(i).real();
      }
      std::cout << std::defaultfloat << '\n';
    }
    std::cout << "interpolation deviation " << format_double(worst) << '\n';
  }
  return kOk;
}

int reconstruct_cyclic(const io::CyclicProblem& pb, const Options& opt, const CVector& samples,
                       const std::optional<CVector>& truth) {
  const auto setup = cyclic_setup(pb);
  if (samples.size() != setup.scheme.num_samples()) {
    std::cerr << "error: expected " << setup.scheme.num_samples() << " samples, got " << samples.size() << '\n';
    return kBadInput;
  }
  const auto R = cyclic::build_sample_matrix(setup.space, setup.scheme);
  const auto rank = cyclic::check_rank(R, opt.tol);
  if (!rank.full_rank) {
    std::cout << "rank " << rank.rank << '/' << rank.columns << ", not recoverable\n";
    return kFail;
  }
  const auto pipe = cyclic::run_pipeline(setup.space, setup.scheme, std::nullopt, opt.tol);
  const CVector x = cyclic::reconstruct(setup.space, setup.scheme, pipe.basis, samples);
  const CVector resampled = cyclic::take_samples(setup.space, setup.scheme, x);
  const double consistency = (resampled - samples).norm() / std::max(samples.norm(), 1e-300);
  const std::string path = out_stem(opt, "reconstruction") + ".csv";
  io::write_csv(path, x);
  std::cout << "wrote " << path << '\n';
  std::cout << "sample consistency residual " << format_double(samples.norm() == 0.0 ? 0.0 : consistency) << '\n';
  bool ok = samples.norm() == 0.0 || consistency <= 1e-8;
  if (truth) {
    if (truth->size() != x.size()) {
      std::cerr << "error: ground truth has length " << truth->size() << ", expected " << x.size() << '\n';
      return kBadInput;
    }
    const double err = (x - *truth).norm() / std::max(truth->norm(), 1e-300);
    std::cout << "residual vs ground truth " << format_double(err) << '\n';
    ok = ok && err <= 1e-8;
  }
  std::cout << (ok ? "reconstruction consistent\n" : "reconstruction MISMATCH\n");
  return ok ? kOk : kFail;
}

// ---------------------------------------------------------------------------
// shift model

int grid_for(const io::ShiftProblem& pb, const Options& opt) {
  if (opt.grid > 0) return opt.grid;
  if (pb.grid > 0) return pb.grid;
  return 1024 * pb.r;
}

int analyze_shift(const io::ShiftProblem& pb, const Options& opt) {
  if (pb.spectra.empty()) throw io::SchemaError("analyze: shift model needs \"spectra\"");
  const auto field = spectral::build_spectral_field(pb.spectra, pb.r, grid_for(pb, opt));
  const auto fc = spectral::frame_constants(field);
  std::cout << "model shift\n";
  std::cout << "r = " << field.r() << ", s = " << field.s() << ", L = " << field.L() << ", grid Q = " << field.grid_size()
            << '\n';
  std::cout << "alpha_G = " << format_double(fc.alpha) << " at w = " << format_double(fc.argmin_alpha) << '\n';
  std::cout << "beta_G = " << format_double(fc.beta) << " at w = " << format_double(fc.argmax_beta) << '\n';
  if (fc.alpha == fc.beta) std::cout << "alpha_G = beta_G = " << format_double(fc.alpha) << '\n';
  std::cout << "min det G*G = " << format_double(fc.min_det) << '\n';
  std::cout << "frame bounds: " << format_double(fc.lower_bound) << ' ' << format_double(fc.upper_bound) << '\n';
  if (fc.alpha > opt.tol) {
    std::cout << "frame, recoverable\n";
    return kOk;
  }
  std::cout << "not a frame (alpha_G <= " << format_double(opt.tol) << "), not recoverable\n";
  return kFail;
}

std::optional<laurent::RationalPoly> integer_poly(const spectral::FiniteSequence& f) {
  std::vector<laurent::Rational> c;
  for (const Complex& v : f.values) {
    if (v.imag() != 0.0 || v.real() != std::floor(v.real()) || std::abs(v.real()) > 1e15) return std::nullopt;
    c.emplace_back(static_cast<long long>(v.real()));
  }
  return laurent::RationalPoly(f.offset, std::move(c));
}

// Two integer spectra with r = 1: the exact Bezout pair gives the duals.
void print_exact_duals(const io::ShiftProblem& pb) {
  if (pb.r != 1 || pb.spectra.size() != 2 || pb.spectra[0].size() != 1 || pb.spectra[1].size() != 1) return;
  const auto g1 = integer_poly(pb.spectra[0][0]), g2 = integer_poly(pb.spectra[1][0]);
  if (!g1 || !g2) return;
  const auto b = laurent::bezout(*g1, *g2);
  if (!b.coprime) return;
  std::cout << "exact duals (G1 H1 + G2 H2 = 1):\n";
  std::cout << "  H1(z) = " << laurent::to_string(b.h1) << '\n';
  std::cout << "  H2(z) = " << laurent::to_string(b.h2) << '\n';
}

int dual_shift(const io::ShiftProblem& pb, const Options& opt) {
  if (pb.spectra.empty()) throw io::SchemaError("dual: shift model needs \"spectra\"");
  const auto field = spectral::build_spectral_field(pb.spectra, pb.r, grid_for(pb, opt));
  spectral::DualField dual;
  try {
    dual = spectral::dual_field(field, nullptr, opt.tol);
  } catch (const RankError& e) {
    std::cout << e.what() << "\nnot recoverable\n";
    return kFail;
  }
  std::cout << "dual residual " << format_double(dual.residual) << '\n';
  print_exact_duals(pb);
  spectral::CoefficientSet coeffs;
  try {
    coeffs = spectral::reconstruction_coefficients(dual, opt.half_length);
  } catch (const spectral::TruncationError& e) {
    std::cout << e.what() << '\n';
    return kFail;
  }
  std::cout << "tail energy " << format_double(coeffs.tail_energy) << '\n';
  const std::string stem = out_stem(opt, "dual");
  for (std::size_t j = 0; j < coeffs.coefficients.size(); ++j) {
    for (std::size_t l = 0; l < coeffs.coefficients[j].size(); ++l) {
      const auto& c = coeffs.coefficients[j][l];
      const std::string path = stem + "_c" + std::to_string(j + 1) + "_a" + std::to_string(l + 1) + ".csv";
      io::write_csv(path, Eigen::Map<const CVector>(c.values.data(), static_cast<Eigen::Index>(c.values.size())),
                    c.offset);
      std::cout << "wrote " << path << '\n';
    }
  }
  return dual.residual <= 1e-9 ? kOk : kFail;
}

std::string render(const laurent::ComplexPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = p.min_deg(); k <= p.max_deg(); ++k) {
    if (p[k] == Complex(0.0, 0.0)) continue;
    if (!out.empty()) out += " + ";
    out += "(" + fmt(p[k]) + ")";
    if (k != 0) out += "z^" + std::to_string(k);
  }
  return out;
}

void print_polyphase(const spectral::Polyphase& p) {
  std::cout << "H(z), " << p.H.size() << " x " << p.H.front().size() << ":\n";
  for (std::size_t j = 0; j < p.H.size(); ++j)
    for (std::size_t k = 0; k < p.H[j].size(); ++k) std::cout << "  H[" << j << "][" << k << "] = " << render(p.H[j][k]) << '\n';
  std::cout << "G(z), " << p.G.size() << " x " << p.G.front().size() << ":\n";
  for (std::size_t k = 0; k < p.G.size(); ++k)
    for (std::size_t j = 0; j < p.G[k].size(); ++j) std::cout << "  G[" << k << "][" << j << "] = " << render(p.G[k][j]) << '\n';
}

void print_pr(const spectral::PRReport& rep) {
  std::cout << "torus residual " << format_double(rep.torus_residual) << '\n';
  std::cout << "time-domain residual " << format_double(rep.time_residual) << '\n';
  std::cout << "perfect reconstruction: " << (rep.pass ? "pass" : "fail")
            << (rep.consistent ? "" : " (time-domain check disagrees)") << '\n';
}

// ---------------------------------------------------------------------------
// lca model

struct LcaSetup {
  lca::FiniteAbelianGroup group;
  std::unique_ptr<lca::GroupRepresentation> rep;
  lca::GroupProblem problem;
};

std::unique_ptr<LcaSetup> lca_setup(const io::LcaProblem& pb) {
  lca::FiniteAbelianGroup G(pb.moduli);
  auto rep = std::make_unique<lca::GroupRepresentation>(G, pb.operators);
  lca::Subgroup H(G, pb.H_gens), M(G, pb.M_gens);
  auto* raw = rep.get();
  return std::make_unique<LcaSetup>(LcaSetup{G, std::move(rep), lca::GroupProblem{raw, pb.generator, pb.samplers, H, M}});
}

void print_group_summary(const lca::GroupGMatrix& gm, const lca::GroupProblem& pb) {
  std::cout << "|H| = " << pb.H.order() << ", |M| = " << pb.M.order() << ", r = |M^perp| = " << gm.r()
            << ", |Omega| = " << gm.omega.size() << ", s = " << pb.samplers.size() << '\n';
  std::cout << "alpha_G = " << format_double(gm.alpha) << '\n';
  std::cout << "beta_G = " << format_double(gm.beta) << '\n';
}

int analyze_lca(const io::LcaProblem& pb, const Options& opt) {
  auto setup = lca_setup(pb);
  const auto gm = lca::build_group_G_matrix(setup->problem, opt.tol);
  std::cout << "model lca\n";
  print_group_summary(gm, setup->problem);
  if (gm.alpha > opt.tol) {
    std::cout << "recoverable\n";
    return kOk;
  }
  std::cout << "not recoverable\n";
  return kFail;
}

int dual_lca(const io::LcaProblem& pb, const Options& opt) {
  auto setup = lca_setup(pb);
  const auto gm = lca::build_group_G_matrix(setup->problem, opt.tol);
  print_group_summary(gm, setup->problem);
  lca::GroupReconstruction rec;
  try {
    rec = lca::group_dual(setup->problem, gm, opt.tol);
  } catch (const RankError& e) {
    std::cout << e.what() << '\n';
    return kFail;
  }
  std::cout << "dual residual " << format_double(rec.dual_residual) << '\n';
  const std::string stem = out_stem(opt, "dual");
  for (std::size_t j = 0; j < rec.vectors.size(); ++j) {
    const std::string path = stem + "_c" + std::to_string(j + 1) + ".csv";
    io::write_csv(path, rec.vectors[j]);
    std::cout << "wrote " << path << '\n';
  }
  return kOk;
}

int reconstruct_lca(const io::LcaProblem& pb, const Options& opt, const CVector& samples,
                    const std::optional<CVector>& truth) {
  auto setup = lca_setup(pb);
  const auto& prob = setup->problem;
  const Eigen::Index expected = static_cast<Eigen::Index>(prob.samplers.size()) * prob.M.order();
  if (samples.size() != expected) {
    std::cerr << "error: expected " << expected << " samples, got " << samples.size() << '\n';
    return kBadInput;
  }
  const auto gm = lca::build_group_G_matrix(prob, opt.tol);
  lca::GroupReconstruction rec;
  try {
    rec = lca::group_dual(prob, gm, opt.tol);
  } catch (const RankError& e) {
    std::cout << e.what() << '\n';
    return kFail;
  }
  const CVector x = lca::group_reconstruct(prob, rec, samples);
  const std::string path = out_stem(opt, "reconstruction") + ".csv";
  io::write_csv(path, x);
  std::cout << "wrote " << path << '\n';
  const double consistency =
      samples.norm() == 0.0 ? 0.0 : (lca::group_samples(prob, x) - samples).norm() / samples.norm();
  std::cout << "sample consistency residual " << format_double(consistency) << '\n';
  bool ok = consistency <= 1e-8;
  if (truth) {
    if (truth->size() != x.size()) {
      std::cerr << "error: ground truth has length " << truth->size() << ", expected " << x.size() << '\n';
      return kBadInput;
    }
    const double err = (x - *truth).norm() / std::max(truth->norm(), 1e-300);
    std::cout << "residual vs ground truth " << format_double(err) << '\n';
    ok = ok && err <= 1e-8;
  }
  std::cout << (ok ? "reconstruction consistent\n" : "reconstruction MISMATCH\n");
  return ok ? kOk : kFail;
}

// ---------------------------------------------------------------------------
// commands

int cmd_analyze(const Options& opt) {
  const auto pf = require_input(opt);
  if (pf.cyclic) return analyze_cyclic(*pf.cyclic, opt);
  if (pf.shift) return analyze_shift(*pf.shift, opt);
  return analyze_lca(*pf.lca, opt);
}

int cmd_dual(const Options& opt) {
  const auto pf = require_input(opt);
  if (pf.cyclic) return dual_cyclic(*pf.cyclic, opt);
  if (pf.shift) return dual_shift(*pf.shift, opt);
  return dual_lca(*pf.lca, opt);
}

int cmd_reconstruct(const Options& opt) {
  const auto pf = require_input(opt);
  if (opt.samples.empty()) throw io::SchemaError("reconstruct: --samples is required");
  const CVector samples = io::read_csv(opt.samples);
  std::optional<CVector> truth;
  if (!opt.truth.empty()) truth = io::read_csv(opt.truth);
  if (pf.cyclic) {
    if (!truth) truth = pf.cyclic->truth;
    return reconstruct_cyclic(*pf.cyclic, opt, samples, truth);
  }
  if (pf.lca) {
    if (!truth) truth = pf.lca->truth;
    return reconstruct_lca(*pf.lca, opt, samples, truth);
  }
  throw io::SchemaError("reconstruct: supported for the cyclic and lca models");
}

int cmd_spline_demo(const Options& opt) {
  const auto sb = spectral::spline_bank(opt.K, opt.p);
  std::cout << "M_" << opt.p << " (K = " << opt.K << ") on n = " << sb.spline.offset << ".." << -sb.spline.offset << ":";
  for (auto v : sb.spline.values) std::cout << ' ' << v;
  std::cout << '\n';
  std::cout << "G1(z) = " << laurent::to_string(sb.G1) << '\n';
  std::cout << "G2(z) = " << laurent::to_string(sb.G2) << '\n';
  if (!sb.bezout.coprime) {
    std::cout << "G1 and G2 are not coprime; common factor " << laurent::to_string(sb.bezout.common_factor) << '\n';
    return kFail;
  }
  std::cout << "H1(z) = " << laurent::to_string(sb.bezout.h1) << '\n';
  std::cout << "H2(z) = " << laurent::to_string(sb.bezout.h2) << '\n';
  const auto residual = sb.G1 * sb.bezout.h1 + sb.G2 * sb.bezout.h2 - laurent::RationalPoly::constant(1);
  std::cout << "Bezout residual G1 H1 + G2 H2 - 1 = " << laurent::to_string(residual) << '\n';
  const int grid = opt.grid > 0 ? opt.grid : 4096;
  const auto pr = spectral::perfect_reconstruction_check(sb.bank, grid, 100, 64, opt.seed);
  print_pr(pr);
  bool ok = residual.is_zero() && pr.pass;
  try {
    const auto cert = laurent::positivity_certificate(sb.G1, grid);
    std::cout << "positivity: min g(w) = " << format_double(cert.min_value) << " at w = " << format_double(cert.argmin)
              << " on " << grid << " points, " << (cert.strictly_positive ? "strictly positive" : "NOT positive")
              << '\n';
    ok = ok && cert.strictly_positive;
  } catch (const std::invalid_argument& e) {
    std::cout << "positivity: " << e.what() << '\n';
    ok = false;
  }
  return ok ? kOk : kFail;
}

int cmd_pr_check(const Options& opt) {
  const auto pf = require_input(opt);
  if (!pf.shift || !pf.shift->filter_bank) throw io::SchemaError("pr-check: needs a shift model with \"filter_bank\"");
  const auto& fb = *pf.shift->filter_bank;
  print_polyphase(spectral::polyphase(fb));
  const int grid = opt.grid > 0 ? opt.grid : (pf.shift->grid > 0 ? pf.shift->grid : 1024);
  const auto rep = spectral::perfect_reconstruction_check(fb, grid, 100, 64, opt.seed);
  print_pr(rep);
  return rep.pass ? kOk : kFail;
}

/// Without input: H = Z_12, M = 3 Z_12 on C^14 with a random representation,
/// compared against the cyclic pipeline.
int builtin_lca_demo(const Options& opt) {
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  auto rand_vec = [&](int n) {
    CVector v(n);
    for (int i = 0; i < n; ++i) v(i) = Complex(nd(rng), nd(rng));
    return v;
  };
  const int dim = 14;
  CMatrix S = CMatrix::Identity(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) S(i, k) += 0.3 / std::sqrt(double(dim)) * Complex(nd(rng), nd(rng));
  CVector lambda(dim);
  for (int i = 0; i < dim; ++i) lambda(i) = std::polar(1.0, 2.0 * std::numbers::pi * (i % 12) / 12.0);
  LinearOperator T(S * lambda.asDiagonal() * S.inverse());
  CVector coeff = CVector::Zero(dim);
  coeff.head(12) = rand_vec(12);
  const CVector a = S * coeff;
  std::vector<CVector> samplers{rand_vec(dim), rand_vec(dim), rand_vec(dim)};

  lca::FiniteAbelianGroup G({12});
  lca::GroupRepresentation rep(G, {T});
  lca::GroupProblem pb{&rep, a, samplers, lca::Subgroup(G, {{1}}), lca::Subgroup(G, {{3}})};
  const auto gm = lca::build_group_G_matrix(pb, opt.tol);
  std::cout << "H = Z_12, M = 3Z_12, dimension " << dim << '\n';
  print_group_summary(gm, pb);
  const auto rec = lca::group_dual(pb, gm, opt.tol);

  cyclic::CyclicSubspace space(T, {a}, {12});
  cyclic::SamplingScheme scheme(samplers, 3, space);
  const auto pipe = cyclic::run_pipeline(space, scheme, std::nullopt, opt.tol);
  double worst = 0.0, worst_rt = 0.0;
  for (int t = 0; t < 10; ++t) {
    const CVector x = space.synthesize(rand_vec(12));
    const CVector via_group = lca::group_reconstruct(pb, rec, lca::group_samples(pb, x));
    const CVector via_cyclic = cyclic::reconstruct(space, scheme, pipe.basis, cyclic::take_samples(space, scheme, x));
    worst = std::max(worst, (via_group - via_cyclic).norm() / x.norm());
    worst_rt = std::max(worst_rt, (via_group - x).norm() / x.norm());
  }
  std::cout << "group round-trip error " << format_double(worst_rt) << '\n';
  std::cout << "group vs cyclic difference " << format_double(worst) << '\n';
  const bool ok = worst <= 1e-10 && worst_rt <= 1e-8;
  std::cout << (ok ? "coherent\n" : "NOT coherent\n");
  return ok ? kOk : kFail;
}

int cmd_lca_demo(const Options& opt) {
  if (opt.input.empty()) return builtin_lca_demo(opt);
  const auto pf = require_input(opt);
  if (!pf.lca) throw io::SchemaError("lca-demo: input must use the lca model");
  auto setup = lca_setup(*pf.lca);
  const auto& pb = setup->problem;
  const auto gm = lca::build_group_G_matrix(pb, opt.tol);
  print_group_summary(gm, pb);
  lca::GroupReconstruction rec;
  try {
    rec = lca::group_dual(pb, gm, opt.tol);
  } catch (const RankError& e) {
    std::cout << e.what() << '\n';
    return kFail;
  }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  const CMatrix V = lca::orbit_matrix(pb);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    CVector c(V.cols());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = Complex(nd(rng), nd(rng));
    const CVector x = V * c;
    worst = std::max(worst, (lca::group_reconstruct(pb, rec, lca::group_samples(pb, x)) - x).norm() / x.norm());
  }
  std::cout << "dual residual " << format_double(rec.dual_residual) << '\n';
  std::cout << "round-trip error " << format_double(worst) << '\n';
  return worst <= 1e-8 ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized sampling and reconstruction in invariant subspaces"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--input", opt.input, "problem file (JSON)");
  app.add_option("--out", opt.out, "output path or stem for CSV files");
  app.add_option("--tol", opt.tol, "rank / frame tolerance")->capture_default_str();
  app.add_option("--grid", opt.grid, "grid size for spectral and torus checks");
  app.add_option("--seed", opt.seed, "seed for randomized checks")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "rank or frame constants and recoverability verdict");
  auto* dual = app.add_subcommand("dual", "dual / reconstruction vectors written as CSV");
  dual->add_option("--u-matrix", opt.u_matrix, "JSON matrix U for the left-inverse family (cyclic model)");
  dual->add_option("--half-length", opt.half_length, "coefficient truncation |n| <= half-length (shift model)")
      ->capture_default_str();
  auto* reconstruct = app.add_subcommand("reconstruct", "reconstruct from a sample CSV");
  reconstruct->add_option("--samples", opt.samples, "sample vector CSV")->required();
  reconstruct->add_option("--truth", opt.truth, "ground-truth vector CSV");
  auto* spline = app.add_subcommand("spline-demo", "discrete B-spline oversampling example");
  spline->add_option("--K", opt.K, "node spacing (odd)")->capture_default_str();
  spline->add_option("--p", opt.p, "spline order")->capture_default_str();
  auto* pr = app.add_subcommand("pr-check", "polyphase perfect-reconstruction certification");
  auto* lca_demo = app.add_subcommand("lca-demo", "finite abelian group sampling");

  for (auto* sub : {analyze, dual, reconstruct, spline, pr, lca_demo}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*analyze) return cmd_analyze(opt);
    if (*dual) return cmd_dual(opt);
    if (*reconstruct) return cmd_reconstruct(opt);
    if (*spline) return cmd_spline_demo(opt);
    if (*pr) return cmd_pr_check(opt);
    if (*lca_demo) return cmd_lca_demo(opt);
  } catch (const RankError& e) {
    std::cerr << "not recoverable: " << e.what() << '\n';
    return kFail;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
