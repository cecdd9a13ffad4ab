#include <gtest/gtest.h>

#include <string>

#include "bosemix/config.hpp"

using namespace bosemix;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

const char* kFull = R"(# full example
[system]
M = 3
N1 = 2
N2 = 3
spacing = 0.5

[potentials]
preset = zero
V1 = 1.0, 0.5, 0.5   # trailing comment
U2 = 0, 0.1, 0.2

[state]
u_re = 1, 0, 0
v_re = 1, 1, 1
v_im = 0, 1, 0

[layout]
n = 1
m = 1
n1 = 1
n2 = 2
m1 = 1
m2 = 1

[run]
times = 0, 0.5
sizes = 2x3, 3x4
witness_count = 3
seed = 42
hermitian = true
method = krylov
dense_threshold = 100
krylov_dim = 12
tol = 1e-9
hartree_dt = 0.01
hartree_stepper = strang

; semicolon comment
[output]
path = out.csv
precision = 12
)";

}  // namespace

TEST(ParseConfig, Defaults) {
  const auto cfg = parse_config("");
  EXPECT_EQ(cfg.sites, 2);
  EXPECT_EQ(cfg.n_a, 2);
  EXPECT_EQ(cfg.times, (std::vector<double>{0.25, 0.5, 1.0}));
  EXPECT_EQ(cfg.size_list(), (std::vector<std::pair<int, int>>{{2, 2}}));
  EXPECT_EQ(cfg.potentials().V12, (std::vector<double>{1.0, 0.0}));
  EXPECT_NEAR(cfg.orbital_u().norm(), 1.0, 1e-15);
  EXPECT_EQ(cfg.propagator_config(16).method, PropagationMethod::Dense);
  EXPECT_EQ(cfg.propagator_config(5000).method, PropagationMethod::Krylov);
}

TEST(ParseConfig, AllKeys) {
  const auto cfg = parse_config(kFull);
  EXPECT_EQ(cfg.sites, 3);
  EXPECT_EQ(cfg.n_b, 3);
  EXPECT_DOUBLE_EQ(cfg.spacing, 0.5);
  const auto p = cfg.potentials();
  EXPECT_EQ(p.V1, (std::vector<double>{1.0, 0.5, 0.5}));
  EXPECT_EQ(p.U2, (std::vector<double>{0.0, 0.1, 0.2}));
  EXPECT_EQ(p.V12, (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_NEAR(std::abs(cfg.orbital_v()(1) - Complex(1.0, 1.0) / 2.0), 0.0, 1e-15);
  EXPECT_EQ(cfg.lr_layout.n2, 2);
  EXPECT_EQ(cfg.size_list(), (std::vector<std::pair<int, int>>{{2, 3}, {3, 4}}));
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_TRUE(cfg.hermitian);
  EXPECT_EQ(cfg.method, MethodChoice::Krylov);
  EXPECT_EQ(cfg.propagator_config(10).method, PropagationMethod::Krylov);
  EXPECT_EQ(cfg.propagator_config(10).krylov_dim, 12);
  EXPECT_EQ(cfg.hartree_stepper, HartreeStepper::Strang);
  EXPECT_EQ(cfg.output_path, "out.csv");
  EXPECT_EQ(cfg.precision, 12);
}

TEST(ParseConfig, LineNumberedDiagnostics) {
  EXPECT_EQ(error_line("[system]\nM = 2\n[bogus]\n"), 3);
  EXPECT_EQ(error_line("[system]\n\nfoo = 1\n"), 3);
  EXPECT_EQ(error_line("[system]\nM = 2\nM = 3\n"), 3);
  EXPECT_EQ(error_line("M = 2\n"), 1);
  EXPECT_EQ(error_line("[system]\nM = two\n"), 2);
  EXPECT_EQ(error_line("[system]\nM\n"), 2);
  EXPECT_EQ(error_line("[system\n"), 1);
  EXPECT_EQ(error_line("[run]\nmethod = magic\n"), 2);
  EXPECT_EQ(error_line("[run]\nsizes = 2by2\n"), 2);
  EXPECT_EQ(error_line("[run]\nhermitian = maybe\n"), 2);
  EXPECT_EQ(error_line("[potentials]\npreset = harmonic\n"), 2);
  EXPECT_EQ(error_line("[run]\ntimes = 0.1, inf\n"), 2);
  EXPECT_EQ(error_line("[run]\nseed = -3\n"), 2);
}

TEST(ParseConfig, CrossFieldErrorsPointAtTheKey) {
  EXPECT_EQ(error_line("[system]\nM = 3\n[potentials]\n\nV1 = 1, 2\n"), 5);
  EXPECT_EQ(error_line("[system]\nM = 4\n[potentials]\nV12 = 1, 2, 0, 3\n"), 4);
  EXPECT_EQ(error_line("[run]\ntimes = 0.5, -1\n"), 2);
  EXPECT_EQ(error_line("[run]\n\nwitness_count = 0\n"), 3);
  EXPECT_EQ(error_line("[output]\nprecision = 30\n"), 2);
  EXPECT_EQ(error_line("[state]\nu_re = 0, 0\n"), 2);
  EXPECT_EQ(error_line("[system]\nM = 1\n"), 2);
  EXPECT_EQ(error_line("[run]\nsizes = 2x2, 30x30\n"), 2);
  EXPECT_EQ(error_line("[layout]\nm2 = 0\n"), 2);
}

TEST(Canonical, HashIgnoresFormattingAndOutputPath) {
  const auto a = parse_config("[system]\nM=3\n[run]\ntimes=0.5,1\n[output]\npath=a.csv\n");
  const auto b = parse_config("# comment\n[run]\ntimes = 0.50 , 1.0\n\n[system]\n  M = 3  \n[output]\npath = b.csv\n");
  EXPECT_EQ(a.canonical(), b.canonical());
  EXPECT_EQ(a.hash(), b.hash());
  auto c = a;
  c.seed += 1;
  EXPECT_NE(c.hash(), a.hash());
  // Canonical text parses back to the same configuration.
  EXPECT_EQ(parse_config(a.canonical()).canonical(), a.canonical());
}

TEST(LoadConfig, MissingFile) {
  EXPECT_THROW(load_config("/nonexistent/bosemix.ini"), ConfigError);
}

TEST(DefaultOrbitals, NormalizedAndDistinct) {
  for (int M : {2, 5, 16}) {
    EXPECT_NEAR(default_orbital_u(M).norm(), 1.0, 1e-15);
    EXPECT_NEAR(default_orbital_v(M).norm(), 1.0, 1e-15);
    EXPECT_GT((default_orbital_u(M) - default_orbital_v(M)).norm(), 1e-2);
  }
}
