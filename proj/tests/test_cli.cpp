#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "carroll/cli/acceptance.hpp"
#include "carroll/cli/commands.hpp"

using namespace carroll::cli;
namespace fs = std::filesystem;

namespace {
fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("carroll_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& name, const std::vector<std::string>& sets, const fs::path& dir) {
  const auto& cmd = find_command(name);
  const auto cfg = resolve(name, cmd.keys, {}, sets, dir.string(), nullptr);
  std::ostringstream log;
  return execute(cmd, cfg, log);
}
}  // namespace

TEST(Config, LayersAndRejectsUnknownKeys) {
  const std::vector<KeySpec> keys{{"n", "4", ""}};
  auto cfg = resolve("x", keys, {{"n", "5"}}, {"n=6", "sigma=0.5"}, "out", nullptr);
  EXPECT_EQ(cfg.get_int("n"), 6);
  EXPECT_EQ(cfg.get_double("sigma"), 0.5);
  EXPECT_THROW(resolve("x", keys, {}, {"bogus=1"}, "out", nullptr), UsageError);
  EXPECT_THROW(resolve("x", keys, {}, {"novalue"}, "out", nullptr), UsageError);
  EXPECT_THROW(resolve("x", keys, {}, {"sigma=abc"}, "out", nullptr), UsageError);
  const std::uint64_t seed = 42;
  EXPECT_EQ(resolve("x", keys, {}, {}, "out", &seed).seed, 42u);
  EXPECT_EQ(split_assignment("a=b=c").second, "b=c");
}

TEST(Config, FileParsing) {
  const auto d = fresh_dir("cfg");
  {
    std::ofstream f(d / "c.txt");
    f << "# comment\n  sigma = 0.25 \n\nomega=2 # trailing\n";
  }
  const auto v = read_config_file((d / "c.txt").string());
  EXPECT_EQ(v.at("sigma"), "0.25");
  EXPECT_EQ(v.at("omega"), "2");
  EXPECT_THROW(read_config_file((d / "missing.txt").string()), UsageError);
}

TEST(Csv, HeaderAndPrecision) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-0.0), "0");
  const auto d = fresh_dir("csv");
  CsvWriter w((d / "a.csv").string(), {"x", "y"}, {"1", "s"});
  w.row({1.0 / 3.0, 2.0});
  EXPECT_THROW(w.row({1.0}), std::exception);
  w.close();
  const auto l = lines_of(d / "a.csv");
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], std::string("# ") + kFormatTag);
  EXPECT_EQ(l[1], "x,y");
  EXPECT_EQ(l[2], "1,s");
  EXPECT_EQ(l[3], "0.33333333333333331,2");
}

TEST(Commands, FiguresTwoBodyWritesAllTables) {
  const auto d = fresh_dir("fig");
  ASSERT_EQ(run("figures-two-body", {"x_points=11", "t_points=11"}, d), kOk);
  for (const char* f : {"density_grid.csv", "current_grid.csv", "marginal_density_vs_x1.csv",
                        "marginal_current_vs_x1.csv", "marginal_density_vs_t.csv",
                        "marginal_current_vs_t.csv", "manifest.txt"})
    EXPECT_TRUE(fs::exists(d / f)) << f;
  const auto l = lines_of(d / "density_grid.csv");
  ASSERT_GT(l.size(), 3u);
  EXPECT_EQ(l.size() - 3, 3u * 11 * 11);
  std::size_t rho_col = 0;
  {
    std::istringstream h(l[1]);
    std::string c;
    for (std::size_t i = 0; std::getline(h, c, ','); ++i)
      if (c == "rho") rho_col = i;
  }
  for (std::size_t i = 3; i < l.size(); ++i) {
    std::istringstream r(l[i]);
    std::string c;
    for (std::size_t k = 0; k <= rho_col; ++k) std::getline(r, c, ',');
    EXPECT_GE(std::stod(c), 0.0);
  }
}

TEST(Commands, DnlsHeatmapShape) {
  const auto d = fresh_dir("dnls");
  ASSERT_EQ(run("dnls", {"T_points=256", "X_final=0.1", "snapshots=5"}, d), kOk);
  EXPECT_EQ(lines_of(d / "heatmap.csv").size() - 3, 5u * 256);
  EXPECT_EQ(lines_of(d / "diagnostics.csv").size() - 3, 5u);
}

TEST(Commands, DnlsStepTooLargeIsNumericError) {
  const auto d = fresh_dir("dnls_big");
  std::ostringstream err;
  const int code = run_guarded([&] { return run("dnls", {"T_points=256", "X_final=1", "snapshots=2", "dX=1"}, d); }, err);
  EXPECT_EQ(code, kNumeric);
}

TEST(Commands, UsageErrors) {
  std::ostringstream err;
  EXPECT_EQ(run_guarded([] { return find_command("nope"), 0; }, err), kUsage);
  EXPECT_EQ(run_guarded([&] { return run("dnls", {"T_points=abc"}, fresh_dir("u")); }, err), kUsage);
}

TEST(Commands, ManifestReproducesRun) {
  const auto a = fresh_dir("rep_a"), b = fresh_dir("rep_b");
  ASSERT_EQ(run("spectrum", {"tau_points=128", "quartic_states=2"}, a), kOk);
  const auto& cmd = find_command("spectrum");
  const auto cfg = resolve("spectrum", cmd.keys, read_config_file((a / "manifest.txt").string()), {},
                           b.string(), nullptr);
  std::ostringstream log;
  ASSERT_EQ(execute(cmd, cfg, log), kOk);
  for (const auto& e : fs::directory_iterator(a))
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
}

TEST(Acceptance, DeterminismAndNegativeControl) {
  AcceptanceOptions o;
  EXPECT_TRUE(check_determinism(o).pass);
  o.quintic_scale = 1.01;
  const auto c = check_dnls(o);
  EXPECT_FALSE(c.pass) << report_line(c);
}
