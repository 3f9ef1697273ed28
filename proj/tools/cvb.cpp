// cvb: dataset generation, Chebyshev-basis fitting, calibration, warping.
//
// Exit codes: 0 success, 1 invalid input or usage, 2 I/O failure,
// 3 non-convergence under --strict. Diagnostics go to stderr only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvb/cvb.hpp"

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;
constexpr int kExitNotConverged = 3;

struct NotConverged {
  std::string what;
};

// Writes to `path`, or to stdout when the path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw std::ios_base::failure("cannot write " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    stream().flush();
    if (!stream()) throw std::ios_base::failure("error writing " + (path_.empty() ? "stdout" : path_));
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cvb::CalibrationModel read_model(const std::string& path) {
  try {
    return cvb::load_model(read_text(path));
  } catch (const cvb::ParseError& e) {
    throw cvb::ParseError(path + ": " + e.what());
  }
}

std::vector<cvb::Correspondence> read_pairs(const std::string& path) {
  std::vector<cvb::Correspondence> out;
  for (const auto& r : cvb::read_csv_file(path, {"u", "v", "X", "Y"}).rows) out.push_back({r[0], r[1], r[2], r[3]});
  return out;
}

// auto: identity when every value already lies in [-1, 1], else padded min/max.
cvb::DomainMap choose_map(const std::string& mode, const std::vector<double>& v) {
  if (mode == "none") return {};
  if (mode == "minmax") return cvb::DomainMap::covering(v);
  for (double x : v)
    if (std::abs(x) > 1.0) return cvb::DomainMap::covering(v);
  return {};
}

void write_summary(const cvb::FitReport& r) {
  std::cerr << "terms_used=" << r.terms_used << " max_abs_residual=" << cvb::format_real(r.max_abs_residual)
            << " l2_residual=" << cvb::format_real(r.l2_residual) << " converged=" << (r.converged ? "true" : "false")
            << '\n';
  for (const auto& t : r.skipped) std::cerr << "skipped degenerate term <" << t.i << "," << t.j << ">\n";
}

void check_strict(bool strict, bool converged, const std::string& what) {
  if (strict && !converged) throw NotConverged{what + " did not reach epsilon"};
}

// ---- gen -------------------------------------------------------------------

void write_samples(const cvb::SampleSet1D& s, const std::string& path) {
  Output out(path);
  out.stream() << "x,y\n";
  for (const auto& p : s.points()) cvb::write_csv_row(out.stream(), {p.x, p.y});
  out.close();
  std::cerr << s.size() << " rows\n";
}

void write_pairs(const std::vector<cvb::Correspondence>& pairs, const std::string& path) {
  Output out(path);
  out.stream() << "u,v,X,Y\n";
  for (const auto& c : pairs) cvb::write_csv_row(out.stream(), {c.u, c.v, c.X, c.Y});
  out.close();
  std::cerr << pairs.size() << " rows\n";
}

// The held-out preset is the 9 x 9 grid spanning the interior of the default
// pattern, for use with `eval`.
std::vector<cvb::Correspondence> preset_pairs(const std::string& preset) {
  const auto camera = cvb::DistortionParams::acceptance_default();
  auto pattern = cvb::GridPattern::default_pattern();
  if (preset == "holdout") {
    pattern.cols = pattern.rows = 9;
    pattern.extra.clear();
  }
  return cvb::gen_correspondences(camera, pattern);
}

// ---- fit1d / fit2d ---------------------------------------------------------

struct FitOptions {
  std::string input;
  std::string algorithm = "approx";
  double epsilon = 0.0;
  std::size_t max_terms = 0;
  std::size_t extra_sweeps = 0;
  std::string trace_path;
  std::pair<std::size_t, std::string> sample{0, ""};
  std::string normalize = "auto";
  bool strict = false;
};

void run_fit1d(const FitOptions& o) {
  const auto table = cvb::read_csv_file(o.input, {"x", "y"});
  std::vector<double> xs;
  for (const auto& r : table.rows) xs.push_back(r[0]);
  if (xs.empty()) throw cvb::ValidationError(o.input + ": no data rows");
  const auto map = choose_map(o.normalize, xs);
  std::vector<cvb::Point1D> pts;
  for (const auto& r : table.rows) pts.push_back({map.forward(r[0]), r[1]});
  const cvb::SampleSet1D samples(std::move(pts));

  const std::size_t n = o.max_terms ? o.max_terms : samples.size();
  const cvb::FitConfig config{.epsilon = o.epsilon, .max_terms = n, .extra_sweeps = o.extra_sweeps};
  auto [model, report] =
      o.algorithm == "interp" ? cvb::cvb_interpolate(samples, config) : cvb::cvb_approximate(samples, config);
  model.xmap = map;

  std::cout << "term,coefficient\n";
  for (std::size_t j = 0; j < model.coeffs.size(); ++j)
    std::cout << j << ',' << cvb::format_real(model.coeffs[j]) << '\n';
  write_summary(report);

  if (!o.trace_path.empty()) {
    Output out(o.trace_path);
    auto& s = out.stream();
    s << "step,term,increment,max_abs_residual,l2_residual";
    for (std::size_t j = 0; j < n; ++j) s << ",a" << j;
    s << '\n';
    for (std::size_t k = 0; k < report.trace.size(); ++k) {
      const auto& st = report.trace[k];
      s << k + 1 << ',' << st.term.i;
      std::vector<double> row{st.increment, st.max_abs_residual, st.l2_residual};
      row.insert(row.end(), st.coeffs.begin(), st.coeffs.end());
      for (double v : row) s << ',' << cvb::format_real(v);
      s << '\n';
    }
    out.close();
  }

  if (o.sample.first > 0) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    Output out(o.sample.second);
    out.stream() << "x,P(x)\n";
    for (std::size_t k = 0; k < o.sample.first; ++k) {
      const double t = o.sample.first == 1 ? 0.5 : static_cast<double>(k) / static_cast<double>(o.sample.first - 1);
      const double x = k + 1 == o.sample.first ? *hi : *lo + t * (*hi - *lo);
      cvb::write_csv_row(out.stream(), {x, cvb::eval_model_1d(model, x)});
    }
    out.close();
  }
  check_strict(o.strict, report.converged, "fit");
}

void run_fit2d(const FitOptions& o) {
  const auto table = cvb::read_csv_file(o.input, {"x", "y", "z"});
  std::vector<double> xs, ys;
  for (const auto& r : table.rows) {
    xs.push_back(r[0]);
    ys.push_back(r[1]);
  }
  if (xs.empty()) throw cvb::ValidationError(o.input + ": no data rows");
  const auto xmap = choose_map(o.normalize, xs);
  const auto ymap = choose_map(o.normalize, ys);
  std::vector<cvb::Point2D> pts;
  for (const auto& r : table.rows) pts.push_back({xmap.forward(r[0]), ymap.forward(r[1]), r[2]});
  const cvb::SampleSet2D samples(std::move(pts));

  const cvb::FitConfig config{
      .epsilon = o.epsilon, .max_terms = o.max_terms ? o.max_terms : 8, .extra_sweeps = o.extra_sweeps};
  auto [model, report] = cvb::cvb_approximate_2d(samples, config);
  model.xmap = xmap;
  model.ymap = ymap;

  std::cout << "i,j,coefficient\n";
  for (const auto& [t, a] : model.coeffs) std::cout << t.i << ',' << t.j << ',' << cvb::format_real(a) << '\n';
  write_summary(report);

  if (!o.trace_path.empty()) {
    Output out(o.trace_path);
    out.stream() << "step,i,j,increment,max_abs_residual,l2_residual\n";
    for (std::size_t k = 0; k < report.trace.size(); ++k) {
      const auto& st = report.trace[k];
      out.stream() << k + 1 << ',' << st.term.i << ',' << st.term.j << ',' << cvb::format_real(st.increment) << ','
                   << cvb::format_real(st.max_abs_residual) << ',' << cvb::format_real(st.l2_residual) << '\n';
    }
    out.close();
  }

  if (o.sample.first > 0) {
    const auto [x0, x1] = std::minmax_element(xs.begin(), xs.end());
    const auto [y0, y1] = std::minmax_element(ys.begin(), ys.end());
    auto at = [&](double lo, double hi, std::size_t k) {
      return o.sample.first == 1 ? 0.5 * (lo + hi)
                                 : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(o.sample.first - 1);
    };
    Output out(o.sample.second);
    out.stream() << "x,y,P(x,y)\n";
    for (std::size_t r = 0; r < o.sample.first; ++r)
      for (std::size_t c = 0; c < o.sample.first; ++c) {
        const double x = at(*x0, *x1, c), y = at(*y0, *y1, r);
        cvb::write_csv_row(out.stream(), {x, y, cvb::eval_model_2d(model, x, y)});
      }
    out.close();
  }
  check_strict(o.strict, report.converged, "fit");
}

void add_fit_options(CLI::App* cmd, FitOptions& o, bool univariate) {
  cmd->add_option("input", o.input, univariate ? "CSV with header x,y" : "CSV with header x,y,z")
      ->required();
  if (univariate)
    cmd->add_option("--algorithm", o.algorithm, "interp or approx")
        ->check(CLI::IsMember({"interp", "approx"}))
        ->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "stop once max |residual| <= epsilon")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--max-terms", o.max_terms,
                  univariate ? "number of terms (default: sample count)" : "degree bound n, terms with i+j < n (default 8)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--extra-sweeps", o.extra_sweeps, "repeat the approximation schedule")->capture_default_str();
  cmd->add_option("--trace", o.trace_path, "write the per-step trace CSV");
  cmd->add_option("--sample", o.sample, univariate ? "N OUT: model at N equispaced x" : "N OUT: model on an N x N grid");
  cmd->add_option("--normalize", o.normalize, "coordinate map: auto, none or minmax")
      ->check(CLI::IsMember({"auto", "none", "minmax"}))
      ->capture_default_str();
  cmd->add_flag("--strict", o.strict, "exit 3 if epsilon is not reached");
}

// ---- calibrate / apply / warp / eval ---------------------------------------

struct CalibrateOptions {
  std::string pairs;
  std::string out;
  double epsilon = 0.5;
  double inverse_epsilon = 0.25;
  std::size_t degree_bound = 8;
  std::size_t extra_sweeps = 0;
  bool strict = false;
};

void run_calibrate(const CalibrateOptions& o) {
  const auto pairs = read_pairs(o.pairs);
  const auto model = cvb::calibrate(
      pairs, {.epsilon = o.epsilon, .max_terms = o.degree_bound, .extra_sweeps = o.extra_sweeps}, o.inverse_epsilon);
  Output out(o.out);
  out.stream() << cvb::save_model(model);
  out.close();

  std::cout << "sub_fit,terms,max_abs_residual,rms_residual,converged\n";
  const std::pair<const char*, const cvb::SubFitStats*> rows[] = {{"fwd_x", &model.stats_fwd_x},
                                                                  {"fwd_y", &model.stats_fwd_y},
                                                                  {"inv_u", &model.stats_inv_u},
                                                                  {"inv_v", &model.stats_inv_v}};
  bool all = true;
  for (const auto& [name, s] : rows) {
    std::cout << name << ',' << s->terms << ',' << cvb::format_real(s->max_abs_residual) << ','
              << cvb::format_real(s->rms_residual) << ',' << (s->converged ? "true" : "false") << '\n';
    all = all && s->converged;
  }
  check_strict(o.strict, all, "calibration");
}

void run_apply(const std::string& model_path, const std::string& points, const std::string& out_path) {
  const auto model = read_model(model_path);
  const auto table = cvb::read_csv_file(points, {"u", "v"});
  cvb::Diagnostics diag;
  Output out(out_path);
  out.stream() << "u,v,X,Y\n";
  for (const auto& r : table.rows) {
    const auto w = cvb::map_point(model, r[0], r[1], &diag);
    cvb::write_csv_row(out.stream(), {r[0], r[1], w.X, w.Y});
  }
  out.close();
  if (diag.extrapolations) std::cerr << "warning: " << diag.extrapolations << " evaluations outside the fit domain\n";
}

struct WarpOptions {
  std::string model;
  std::string in;
  std::string out;
  std::vector<double> window;
  std::size_t width = 0;
  std::size_t height = 0;
  int fill = 0;
};

void run_warp(const WarpOptions& o) {
  const auto model = read_model(o.model);
  const auto image = cvb::read_pnm_file(o.in);
  cvb::WarpSpec spec;
  spec.width = o.width ? o.width : image.width;
  spec.height = o.height ? o.height : image.height;
  spec.fill = static_cast<std::uint8_t>(o.fill);
  if (!o.window.empty()) {
    spec.x_min = o.window[0];
    spec.y_min = o.window[1];
    spec.x_max = o.window[2];
    spec.y_max = o.window[3];
  } else {
    // Bounding box of the image corners in world coordinates.
    const double w = static_cast<double>(image.width), h = static_cast<double>(image.height);
    bool first = true;
    for (auto [u, v] : {std::pair{0.0, 0.0}, {w, 0.0}, {0.0, h}, {w, h}}) {
      const auto p = cvb::map_point(model, u, v);
      spec.x_min = first ? p.X : std::min(spec.x_min, p.X);
      spec.x_max = first ? p.X : std::max(spec.x_max, p.X);
      spec.y_min = first ? p.Y : std::min(spec.y_min, p.Y);
      spec.y_max = first ? p.Y : std::max(spec.y_max, p.Y);
      first = false;
    }
  }
  cvb::Diagnostics diag;
  const auto out = cvb::warp_image(model, image, spec, &diag);
  cvb::write_pnm_file(o.out, out);
  std::cerr << "window " << spec.x_min << "," << spec.y_min << "," << spec.x_max << "," << spec.y_max << " -> "
            << spec.width << "x" << spec.height << '\n';
  if (diag.extrapolations) std::cerr << "warning: " << diag.extrapolations << " evaluations outside the fit domain\n";
}

void run_eval(const std::string& model_path, const std::string& truth) {
  const auto model = read_model(model_path);
  const auto pairs = read_pairs(truth);
  if (pairs.empty()) throw cvb::ValidationError(truth + ": no data rows");
  double worst = 0.0, sq = 0.0;
  for (const auto& c : pairs) {
    const auto w = cvb::map_point(model, c.u, c.v);
    const double e = std::hypot(w.X - c.X, w.Y - c.Y);
    worst = std::max(worst, e);
    sq += e * e;
  }
  std::cout << "max_err_mm,rms_err_mm,n_points\n"
            << cvb::format_real(worst) << ',' << cvb::format_real(std::sqrt(sq / static_cast<double>(pairs.size())))
            << ',' << pairs.size() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chebyshev-basis curve fitting and camera rectification", "cvb"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "write a synthetic dataset as CSV")->require_subcommand(1);
  std::string gen_out;
  std::size_t runge_m = 0;
  std::uint64_t seed = 0;
  std::string preset = "default";
  auto* gen_runge = gen->add_subcommand("runge", "m equispaced samples of 1/(1+25x^2)");
  gen_runge->add_option("--m", runge_m, "sample count (>= 2)")->required();
  auto* gen_humped = gen->add_subcommand("humped-flat", "fixed 9-point humped-and-flat set");
  auto* gen_noisy = gen->add_subcommand("noisy-line", "9 unevenly spaced noisy points on a line");
  gen_noisy->add_option("--seed", seed, "generator seed")->capture_default_str();
  auto* gen_corr = gen->add_subcommand("correspondences", "pixel/world pairs from the synthetic camera");
  gen_corr->add_option("--preset", preset, "default (20 key points) or holdout (9x9 grid)")
      ->check(CLI::IsMember({"default", "holdout"}))
      ->capture_default_str();
  for (auto* c : {gen_runge, gen_humped, gen_noisy, gen_corr})
    c->add_option("--out", gen_out, "output CSV (default: stdout)");

  FitOptions f1, f2;
  auto* fit1d = app.add_subcommand("fit1d", "univariate fit of x,y data");
  add_fit_options(fit1d, f1, true);
  auto* fit2d = app.add_subcommand("fit2d", "bivariate approximation of x,y,z data");
  add_fit_options(fit2d, f2, false);

  CalibrateOptions co;
  auto* cal = app.add_subcommand("calibrate", "fit pixel <-> world maps from u,v,X,Y pairs");
  cal->add_option("pairs", co.pairs, "CSV with header u,v,X,Y")->required();
  cal->add_option("--out", co.out, "model document")->required();
  cal->add_option("--epsilon", co.epsilon, "forward target, world units")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cal->add_option("--inverse-epsilon", co.inverse_epsilon, "inverse target, pixels")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cal->add_option("--degree-bound", co.degree_bound, "terms with i+j < n")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cal->add_option("--extra-sweeps", co.extra_sweeps, "repeat the approximation schedule")->capture_default_str();
  cal->add_flag("--strict", co.strict, "exit 3 if any sub-fit misses its target");

  std::string model_path, points_path, apply_out;
  auto* apply = app.add_subcommand("apply", "map u,v points to world coordinates");
  apply->add_option("model", model_path, "model document")->required();
  apply->add_option("points", points_path, "CSV with header u,v")->required();
  apply->add_option("--out", apply_out, "output CSV (default: stdout)");

  WarpOptions wo;
  auto* warp = app.add_subcommand("warp", "rectify a PPM/PGM image");
  warp->add_option("model", wo.model, "model document")->required();
  warp->add_option("input", wo.in, "input image (P2/P3/P5/P6)")->required();
  warp->add_option("output", wo.out, "output image")->required();
  warp->add_option("--window", wo.window, "world window x0,y0,x1,y1")->delimiter(',')->expected(4);
  warp->add_option("--width", wo.width, "output width (default: input width)");
  warp->add_option("--height", wo.height, "output height (default: input height)");
  warp->add_option("--fill", wo.fill, "value for unmapped pixels")->check(CLI::Range(0, 255))->capture_default_str();

  std::string truth_path;
  auto* eval = app.add_subcommand("eval", "mapping error against known u,v,X,Y pairs");
  eval->add_option("model", model_path, "model document")->required();
  eval->add_option("truth", truth_path, "CSV with header u,v,X,Y")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (gen_runge->parsed()) write_samples(cvb::gen_runge(runge_m), gen_out);
    if (gen_humped->parsed()) write_samples(cvb::gen_humped_flat(), gen_out);
    if (gen_noisy->parsed()) write_samples(cvb::gen_noisy_line(seed), gen_out);
    if (gen_corr->parsed()) write_pairs(preset_pairs(preset), gen_out);
    if (fit1d->parsed()) run_fit1d(f1);
    if (fit2d->parsed()) run_fit2d(f2);
    if (cal->parsed()) run_calibrate(co);
    if (apply->parsed()) run_apply(model_path, points_path, apply_out);
    if (warp->parsed()) run_warp(wo);
    if (eval->parsed()) run_eval(model_path, truth_path);
  } catch (const NotConverged& e) {
    std::cerr << "error: " << e.what << '\n';
    return kExitNotConverged;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
