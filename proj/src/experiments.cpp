#include "bosemix/experiments.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bosemix/hartree.hpp"
#include "bosemix/observables.hpp"
#include "bosemix/parallel.hpp"

namespace bosemix {

namespace {

constexpr double kRatioSlack = 1e-6;
constexpr double kIdentityTol = 1e-9;
constexpr double kInitialGapTol = 1e-10;
constexpr double kTrendFactor = 1.25;

class CsvWriter {
 public:
  CsvWriter(const ExperimentConfig& config, const char* suite, const char* header)
      : precision_(config.precision) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, config.hash());
    out_ << "# bosemix-lab " << BOSEMIX_VERSION << " suite=" << suite << " config_hash=" << hash
         << "\n"
         << header << "\n";
  }

  CsvWriter& num(double x) {
    sep();
    out_ << format_csv_number(x, precision_);
    return *this;
  }
  CsvWriter& integer(long long x) {
    sep();
    out_ << x;
    return *this;
  }
  void end_row() {
    out_ << "\n";
    first_ = true;
  }
  void comment(const std::string& text) { out_ << "# " << text << "\n"; }
  std::string str() const { return out_.str(); }

 private:
  void sep() {
    if (!first_) out_ << ",";
    first_ = false;
  }

  std::ostringstream out_;
  int precision_;
  bool first_ = true;
};

struct SizeContext {
  SpeciesConfig species;
  SparseHamiltonian H;
  Propagator propagator;
};

SizeContext make_context(const ExperimentConfig& config, std::pair<int, int> size) {
  const LatticeGrid grid = config.grid();
  const SpeciesConfig species(size.first, size.second);
  SparseHamiltonian H = assemble_full(grid, species, config.potentials());
  Propagator propagator(H, config.propagator_config(H.dimension()));
  return SizeContext{species, std::move(H), std::move(propagator)};
}

std::string describe(const char* what, double t, int na, int nb, std::size_t sample) {
  std::ostringstream s;
  s << what << " at t=" << format_csv_number(t) << " N1=" << na << " N2=" << nb
    << " sample=" << sample;
  return s.str();
}

}  // namespace

std::string format_csv_number(double x, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", std::clamp(precision, 1, 17) - 1, x);
  return buf;
}

// ---------------------------------------------------------------------------

SuiteOutput run_lr_sweep(const ExperimentConfig& config, int threads) {
  const CommutatorLayout& layout = config.lr_layout;
  CsvWriter csv(config, "lr-sweep", "t,n1,n2,m1,m2,N1,N2,sample,measured,bound,ratio");
  SuiteOutput result;
  double max_ratio = 0.0;

  for (const auto& size : config.size_list()) {
    try {
      layout.validate(SpeciesConfig(size.first, size.second));
    } catch (const InvalidArgument& e) {
      throw ConfigError(0, e.what());
    }
    const SizeContext ctx = make_context(config, size);
    const WitnessSet witnesses = WitnessSet::generate(
        config.seed, static_cast<std::size_t>(config.witness_count), config.sites, layout,
        config.hermitian);
    const std::vector<LrRow> rows = lr_witness_sweep(ctx.propagator, config.times, witnesses, threads);

    for (const LrRow& row : rows) {
      csv.num(row.t).integer(layout.n1).integer(layout.n2).integer(layout.m1).integer(layout.m2);
      csv.integer(size.first).integer(size.second).integer(static_cast<long long>(row.sample));
      csv.num(row.measured).num(row.bound).num(row.ratio);
      csv.end_row();

      if (!row.error.empty() || !row.converged) {
        if (result.exit_code != kExitNumericalFailure) {
          result.exit_code = kExitNumericalFailure;
          result.message = describe(row.error.empty() ? "power iteration did not converge"
                                                      : row.error.c_str(),
                                    row.t, size.first, size.second, row.sample);
        }
        continue;
      }
      max_ratio = std::max(max_ratio, row.ratio);
      if (!(row.ratio <= 1.0 + kRatioSlack) && result.exit_code == kExitPass) {
        result.exit_code = kExitViolation;
        result.message = describe("commutator bound violated", row.t, size.first, size.second,
                                  row.sample) +
                         " measured=" + format_csv_number(row.measured) +
                         " bound=" + format_csv_number(row.bound);
      }
    }
  }
  csv.comment("max_ratio=" + format_csv_number(max_ratio, config.precision));
  result.csv = csv.str();
  return result;
}

SuiteOutput run_corr_sweep(const ExperimentConfig& config, int threads) {
  const int n = config.n;
  const int m = config.m;
  const CommutatorLayout layout{n, n, m, m};
  CsvWriter csv(config, "corr-sweep", "t,n,m,N1,N2,sample,abs_corr,bound,ratio");
  SuiteOutput result;
  double max_ratio = 0.0;

  for (const auto& size : config.size_list()) {
    const SizeContext ctx = make_context(config, size);
    const int smaller = std::min(size.first, size.second);
    if (n >= smaller || m >= smaller || n + m > smaller) {
      throw ConfigError(0, "layout n, m does not fit N1=" + std::to_string(size.first) +
                               " N2=" + std::to_string(size.second));
    }
    const MixtureState psi0 =
        product_state(config.orbital_u(), config.orbital_v(), ctx.species, config.grid());
    const WitnessSet witnesses = WitnessSet::generate(
        config.seed, static_cast<std::size_t>(config.witness_count), config.sites, layout,
        config.hermitian);

    const std::size_t samples = witnesses.samples.size();
    std::vector<CorrelationResult> cells(config.times.size() * samples);
    std::vector<std::string> errors(cells.size());
    parallel_for(cells.size(), threads, [&](std::size_t c) {
      try {
        cells[c] = correlation(ctx.propagator, psi0, config.times[c / samples],
                               witnesses.samples[c % samples], n, m);
      } catch (const NumericalError& e) {
        errors[c] = e.what();
      }
    });

    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double t = config.times[c / samples];
      const std::size_t sample = c % samples;
      if (!errors[c].empty()) {
        if (result.exit_code != kExitNumericalFailure) {
          result.exit_code = kExitNumericalFailure;
          result.message = describe(errors[c].c_str(), t, size.first, size.second, sample);
        }
        csv.num(t).integer(n).integer(m).integer(size.first).integer(size.second);
        csv.integer(static_cast<long long>(sample));
        csv.num(std::nan("")).num(std::nan("")).num(std::nan(""));
        csv.end_row();
        continue;
      }
      const CorrelationResult& r = cells[c];
      const double ratio = bound_ratio(r.abs, r.bound);
      csv.num(t).integer(n).integer(m).integer(size.first).integer(size.second);
      csv.integer(static_cast<long long>(sample)).num(r.abs).num(r.bound).num(ratio);
      csv.end_row();
      max_ratio = std::max(max_ratio, ratio);
      if (!(ratio <= 1.0 + kRatioSlack) && result.exit_code == kExitPass) {
        result.exit_code = kExitViolation;
        result.message = describe("correlation bound violated", t, size.first, size.second, sample) +
                         " abs_corr=" + format_csv_number(r.abs) +
                         " bound=" + format_csv_number(r.bound);
      }
    }
  }
  csv.comment("max_ratio=" + format_csv_number(max_ratio, config.precision));
  result.csv = csv.str();
  return result;
}

SuiteOutput run_decomposition_check(const ExperimentConfig& config, int threads) {
  const int n = config.n;
  const int m = config.m;
  CsvWriter csv(config, "decomp-check",
                "t,N1,N2,sample,P_re,P_im,Q_re,Q_im,R_re,R_im,corr_re,corr_im,residual");
  SuiteOutput result;
  double max_residual = 0.0;

  for (const auto& size : config.size_list()) {
    const SizeContext ctx = make_context(config, size);
    const int smaller = std::min(size.first, size.second);
    if (n >= smaller || m >= smaller || n + m > smaller) {
      throw ConfigError(0, "layout n, m does not fit N1=" + std::to_string(size.first) +
                               " N2=" + std::to_string(size.second));
    }
    const MixtureState psi0 =
        product_state(config.orbital_u(), config.orbital_v(), ctx.species, config.grid());
    const WitnessSet witnesses = WitnessSet::generate(
        config.seed, static_cast<std::size_t>(config.witness_count), config.sites,
        CommutatorLayout{n, n, m, m}, config.hermitian);

    const std::size_t samples = witnesses.samples.size();
    std::vector<DecompositionReport> cells(config.times.size() * samples);
    std::vector<std::string> errors(cells.size());
    parallel_for(cells.size(), threads, [&](std::size_t c) {
      try {
        cells[c] = projector_decomposition(ctx.propagator, psi0, config.times[c / samples],
                                           witnesses.samples[c % samples], n, m);
      } catch (const NumericalError& e) {
        errors[c] = e.what();
      }
    });

    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double t = config.times[c / samples];
      const std::size_t sample = c % samples;
      const DecompositionReport& r = cells[c];
      csv.num(t).integer(size.first).integer(size.second).integer(static_cast<long long>(sample));
      if (!errors[c].empty()) {
        for (int k = 0; k < 9; ++k) csv.num(std::nan(""));
        csv.end_row();
        if (result.exit_code != kExitNumericalFailure) {
          result.exit_code = kExitNumericalFailure;
          result.message = describe(errors[c].c_str(), t, size.first, size.second, sample);
        }
        continue;
      }
      csv.num(r.P.real()).num(r.P.imag()).num(r.Q.real()).num(r.Q.imag());
      csv.num(r.R.real()).num(r.R.imag()).num(r.correlation.real()).num(r.correlation.imag());
      csv.num(r.residual);
      csv.end_row();
      max_residual = std::max(max_residual, r.residual);
      if (!(r.residual <= kIdentityTol) && result.exit_code == kExitPass) {
        result.exit_code = kExitViolation;
        result.message = describe("decomposition residual above 1e-9", t, size.first, size.second,
                                  sample) +
                         " residual=" + format_csv_number(r.residual);
      }
    }
  }
  csv.comment("max_residual=" + format_csv_number(max_residual, config.precision));
  result.csv = csv.str();
  return result;
}

SuiteOutput run_hartree_compare(const ExperimentConfig& config, int threads) {
  const auto sizes = config.size_list();
  const double t_max = *std::max_element(config.times.begin(), config.times.end());
  const double dt = config.hartree_dt;
  const double T = std::ceil(t_max / dt - 1e-9) * dt;

  std::vector<std::vector<GapRow>> gaps(sizes.size());
  std::vector<std::string> errors(sizes.size());
  parallel_for(sizes.size(), threads, [&](std::size_t k) {
    try {
      const SizeContext ctx = make_context(config, sizes[k]);
      const CVector u = config.orbital_u();
      const CVector v = config.orbital_v();
      const MixtureState psi0 = product_state(u, v, ctx.species, config.grid());
      const HartreeParams params = HartreeParams::matching(ctx.H, dt, config.hartree_stepper);
      const auto trajectory = integrate(HartreeState{u, v, 0.0}, params, T);
      gaps[k] = factorization_gap(ctx.H, psi0, params, trajectory, config.times,
                                  ctx.propagator.config());
    } catch (const NumericalError& e) {
      errors[k] = e.what();
    }
  });

  CsvWriter csv(config, "hartree-compare", "t,N1,N2,gap_A,gap_B");
  SuiteOutput result;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (!errors[k].empty()) {
      result.exit_code = kExitNumericalFailure;
      result.message = errors[k];
      result.csv = csv.str();
      return result;
    }
  }

  bool trend_ok = true;
  for (std::size_t ti = 0; ti < config.times.size(); ++ti) {
    const double t = config.times[ti];
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const GapRow& row = gaps[k][ti];
      csv.num(t).integer(sizes[k].first).integer(sizes[k].second).num(row.gap_a).num(row.gap_b);
      csv.end_row();
      if (t == 0.0 && (row.gap_a > kInitialGapTol || row.gap_b > kInitialGapTol) &&
          result.exit_code == kExitPass) {
        result.exit_code = kExitViolation;
        result.message = "nonzero initial factorization gap for N1=" +
                         std::to_string(sizes[k].first) + " N2=" + std::to_string(sizes[k].second);
      }
      if (k > 0) {
        const GapRow& prev = gaps[k - 1][ti];
        if (row.gap_a > kTrendFactor * prev.gap_a + kInitialGapTol ||
            row.gap_b > kTrendFactor * prev.gap_b + kInitialGapTol) {
          trend_ok = false;
        }
      }
    }
  }
  csv.comment(std::string("trend_nonincreasing_within_1.25=") + (trend_ok ? "true" : "false"));
  result.csv = csv.str();
  return result;
}

}  // namespace bosemix
