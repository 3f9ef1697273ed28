#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cvb/csv.hpp"
#include "cvb/raster.hpp"

namespace {

namespace fs = std::filesystem;

// One directory per test so ctest -j can run them side by side.
fs::path workdir() {
  const fs::path d = fs::path(CVB_TEST_TMP) / ::testing::UnitTest::GetInstance()->current_test_info()->name();
  fs::create_directories(d);
  return d;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

// Runs the tool with stdout and stderr captured to files; returns the exit code.
int run(const std::string& args, const std::string& tag = "last") {
  const std::string cmd =
      std::string(CVB_EXE) + " " + args + " > " + path(tag + ".out") + " 2> " + path(tag + ".err");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& name, const std::string& text) { std::ofstream(path(name)) << text; }

cvb::Table table(const std::string& p, const std::vector<std::string>& header) { return cvb::read_csv_file(p, header); }

TEST(Cli, GenWritesDeclaredRowCounts) {
  ASSERT_EQ(run("gen runge --m 9 --out " + path("runge.csv")), 0);
  EXPECT_EQ(table(path("runge.csv"), {"x", "y"}).rows.size(), 9u);
  ASSERT_EQ(run("gen correspondences --preset default --out " + path("pairs.csv")), 0);
  EXPECT_EQ(table(path("pairs.csv"), {"u", "v", "X", "Y"}).rows.size(), 20u);
  ASSERT_EQ(run("gen humped-flat --out " + path("hf.csv")), 0);
  EXPECT_EQ(table(path("hf.csv"), {"x", "y"}).rows.size(), 9u);
}

TEST(Cli, GenNoisyLineIsDeterministic) {
  ASSERT_EQ(run("gen noisy-line --seed 7 --out " + path("n1.csv")), 0);
  ASSERT_EQ(run("gen noisy-line --seed 7 --out " + path("n2.csv")), 0);
  EXPECT_EQ(slurp(path("n1.csv")), slurp(path("n2.csv")));
}

TEST(Cli, UsageAndIoErrors) {
  EXPECT_EQ(run("gen bogus"), 1);
  EXPECT_EQ(run("fit1d " + path("does_not_exist.csv")), 2);
  EXPECT_EQ(run("gen runge --m 3 --out /nonexistent_dir/x.csv"), 2);
  EXPECT_EQ(run("gen runge --m 1"), 1);
}

TEST(Cli, Fit1dInterpolationAndSampling) {
  write_file("t1.csv", "x,y\n-1,0\n0,1\n1,4\n");
  ASSERT_EQ(run("fit1d " + path("t1.csv") + " --algorithm interp --max-terms 3 --sample 5 " + path("s.csv") +
                    " --trace " + path("trace.csv"),
                "fit"),
            0);
  const auto c = table(path("fit.out"), {"term", "coefficient"}).rows;
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c[0][1], 1.5, 1e-12);
  EXPECT_NEAR(c[1][1], 2.0, 1e-12);
  EXPECT_NEAR(c[2][1], 0.5, 1e-12);

  const auto s = table(path("s.csv"), {"x", "P(x)"}).rows;
  ASSERT_EQ(s.size(), 5u);
  EXPECT_EQ(s[3][0], 0.5);
  EXPECT_NEAR(s[3][1], 2.25, 1e-12);

  const auto t = table(path("trace.csv"), {"step", "term", "increment", "max_abs_residual", "l2_residual", "a0",
                                           "a1", "a2"})
                     .rows;
  ASSERT_EQ(t.size(), 3u);
  EXPECT_NEAR(t[0][4], 2.943920289, 1e-8);
  EXPECT_NEAR(t[1][4], 0.816496581, 1e-8);
}

TEST(Cli, Fit1dApproximationAndStrict) {
  write_file("t1.csv", "x,y\n-1,0\n0,1\n1,4\n");
  ASSERT_EQ(run("fit1d " + path("t1.csv") + " --epsilon 0 --max-terms 3", "approx"), 0);
  const auto c = table(path("approx.out"), {"term", "coefficient"}).rows;
  EXPECT_NEAR(c[0][1], 41.0 / 27, 1e-12);
  EXPECT_NEAR(c[1][1], 2.0, 1e-12);
  EXPECT_NEAR(c[2][1], 4.0 / 9, 1e-12);
  EXPECT_NE(slurp(path("approx.err")).find("converged=false"), std::string::npos);
  EXPECT_EQ(run("fit1d " + path("t1.csv") + " --epsilon 0 --max-terms 3 --strict"), 3);
  EXPECT_EQ(run("fit1d " + path("t1.csv") + " --epsilon 0.1 --max-terms 3 --strict"), 0);
}

TEST(Cli, Fit1dRejectsDuplicateX) {
  write_file("dup.csv", "x,y\n0.5,1\n0.5,2\n");
  EXPECT_EQ(run("fit1d " + path("dup.csv")), 1);
  write_file("bad.csv", "x,y\n0.5,one\n");
  EXPECT_EQ(run("fit1d " + path("bad.csv")), 1);
}

TEST(Cli, Fit1dNormalizesWideInput) {
  write_file("wide.csv", "x,y\n0,1\n50,3\n100,5\n");
  ASSERT_EQ(run("fit1d " + path("wide.csv") + " --algorithm interp --sample 3 " + path("ws.csv")), 0);
  const auto s = table(path("ws.csv"), {"x", "P(x)"}).rows;
  EXPECT_NEAR(s[1][1], 3.0, 1e-12);
  EXPECT_EQ(run("fit1d " + path("wide.csv") + " --normalize none"), 1);
}

TEST(Cli, Fit2dConstantAndProduct) {
  std::ostringstream flat, prod;
  flat << "x,y,z\n";
  prod << "x,y,z\n";
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double x = -1.0 + 2.0 * i / 3, y = -1.0 + 2.0 * j / 3;
      flat << x << ',' << y << ",3\n";
      prod << cvb::format_real(x) << ',' << cvb::format_real(y) << ',' << cvb::format_real(x * y) << '\n';
    }
  write_file("flat.csv", flat.str());
  write_file("prod.csv", prod.str());

  ASSERT_EQ(run("fit2d " + path("flat.csv") + " --epsilon 1e-12", "flat"), 0);
  const auto a = table(path("flat.out"), {"i", "j", "coefficient"}).rows;
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0], (std::vector<double>{0, 0, 3}));

  ASSERT_EQ(run("fit2d " + path("prod.csv") + " --epsilon 1e-9 --max-terms 3", "prod"), 0);
  for (const auto& r : table(path("prod.out"), {"i", "j", "coefficient"}).rows)
    EXPECT_NEAR(r[2], r[0] == 1 && r[1] == 1 ? 1.0 : 0.0, 1e-9);

  EXPECT_EQ(run("fit2d " + path("prod.csv") + " --epsilon 1e-300 --max-terms 2", "tiny"), 0);
  EXPECT_NE(slurp(path("tiny.err")).find("converged=false"), std::string::npos);
  EXPECT_EQ(run("fit2d " + path("prod.csv") + " --epsilon 1e-300 --max-terms 2 --strict"), 3);
}

TEST(Cli, CalibrateIdentityAndEval) {
  std::ostringstream pairs;
  pairs << "u,v,X,Y\n";
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 4; ++c) pairs << c * 8 << ',' << r * 4 << ',' << c * 8 << ',' << r * 4 << '\n';
  write_file("id.csv", pairs.str());
  ASSERT_EQ(run("calibrate " + path("id.csv") + " --epsilon 1e-9 --inverse-epsilon 1e-9 --degree-bound 3 --out " +
                    path("id.json"),
                "cal"),
            0);
  const auto summary = slurp(path("cal.out"));
  for (const char* name : {"fwd_x,", "fwd_y,", "inv_u,", "inv_v,"}) EXPECT_NE(summary.find(name), std::string::npos);
  ASSERT_EQ(run("eval " + path("id.json") + " " + path("id.csv"), "eval"), 0);
  const auto e = table(path("eval.out"), {"max_err_mm", "rms_err_mm", "n_points"}).rows;
  EXPECT_LE(e[0][0], 1e-6);
  EXPECT_EQ(e[0][2], 20.0);

  write_file("pts.csv", "u,v\n3,5\n10.5,2.25\n");
  ASSERT_EQ(run("apply " + path("id.json") + " " + path("pts.csv") + " --out " + path("applied.csv")), 0);
  const auto a = table(path("applied.csv"), {"u", "v", "X", "Y"}).rows;
  ASSERT_EQ(a.size(), 2u);
  EXPECT_NEAR(a[1][2], 10.5, 1e-6);
  EXPECT_NEAR(a[1][3], 2.25, 1e-6);
}

TEST(Cli, CalibrateOracleFixtureHeldOut) {
  ASSERT_EQ(run("gen correspondences --preset default --out " + path("fx.csv")), 0);
  ASSERT_EQ(run("gen correspondences --preset holdout --out " + path("ho.csv")), 0);
  ASSERT_EQ(run("calibrate " + path("fx.csv") + " --out " + path("fx.json") + " --strict"), 0);
  ASSERT_EQ(run("eval " + path("fx.json") + " " + path("ho.csv"), "fxeval"), 0);
  const auto e = table(path("fxeval.out"), {"max_err_mm", "rms_err_mm", "n_points"}).rows;
  EXPECT_LE(e[0][0], 0.8);
  EXPECT_EQ(e[0][2], 81.0);
  EXPECT_EQ(run("eval " + path("missing.json") + " " + path("ho.csv")), 2);
  write_file("broken.json", "{\"version\": 1,");
  EXPECT_EQ(run("eval " + path("broken.json") + " " + path("ho.csv")), 1);
}

TEST(Cli, WarpWithIdentityModelIsByteIdentical) {
  const std::size_t W = 32, H = 20;
  std::ostringstream pairs;
  pairs << "u,v,X,Y\n";
  for (int r = 0; r <= 4; ++r)
    for (int c = 0; c <= 4; ++c) pairs << c * 8 << ',' << r * 5 << ',' << c * 8 << ',' << r * 5 << '\n';
  write_file("wid.csv", pairs.str());
  ASSERT_EQ(run("calibrate " + path("wid.csv") + " --epsilon 1e-10 --inverse-epsilon 1e-10 --degree-bound 3 --out " +
                path("wid.json")),
            0);
  cvb::Raster img(W, H, 3);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i * 7 % 251);
  cvb::write_pnm_file(path("in.ppm"), img);
  ASSERT_EQ(run("warp " + path("wid.json") + " " + path("in.ppm") + " " + path("out.ppm")), 0);
  EXPECT_EQ(slurp(path("out.ppm")), slurp(path("in.ppm")));

  ASSERT_EQ(run("warp " + path("wid.json") + " " + path("in.ppm") + " " + path("out2.ppm") +
                " --window=4,0,36,20 --fill 9"),
            0);
  const auto shifted = cvb::read_pnm_file(path("out2.ppm"));
  EXPECT_EQ(shifted.at(0, 0)[0], img.at(4, 0)[0]);
  EXPECT_EQ(shifted.at(W - 1, 0)[0], 9);
}

}  // namespace
