// Copyright 2026 The vortexwm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vortexwm/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vortexwm/errors.hpp"
#include "vortexwm/json_io.hpp"
#include "vortexwm/scenario.hpp"

namespace vortexwm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string join_args(int argc, const char* const* argv) {
  std::string s;
  for (int k = 0; k < argc; ++k) {
    if (k) s += ' ';
    s += argv[k];
  }
  return s;
}

BlochVector parse_vector(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  double v[3];
  int n = 0;
  while (std::getline(ss, part, ',')) {
    if (n == 3) throw ConfigError("--postselect", "expected x,y,z");
    try {
      std::size_t used = 0;
      v[n] = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("--postselect", "not a number: '" + part + "'");
    }
    ++n;
  }
  if (n != 3) throw ConfigError("--postselect", "expected x,y,z");
  return {v[0], v[1], v[2]};
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

std::string image_name(std::size_t index, ImageFormat format) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "img_%04zu.%s", index, format == ImageFormat::Pgm16 ? "pgm" : "csv");
  return buf;
}

std::string warn_margin(double margin, double threshold, std::size_t index) {
  std::ostringstream os;
  os << "WARNING: weak-condition margin " << std::setprecision(3) << margin << " below " << threshold
     << " for image " << index << "; the ZIP no longer tracks G w linearly";
  return os.str();
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  std::string out;
  std::string mode;
  std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& args, const std::string& command, std::ostream& out, std::ostream& err) {
  auto cfg = ScenarioConfig::load(args.config);
  if (!args.out.empty()) cfg.output_dir = args.out;
  if (!args.mode.empty()) {
    try {
      cfg.mode = field_mode_from_string(args.mode);
    } catch (const DomainError& e) {
      throw ConfigError("--mode", e.what());
    }
  }
  if (args.seed) cfg.noise.seed = *args.seed;
  cfg.validate();

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.output_dir.string() + ": " + ec.message());

  const bool mixed = cfg.source.kind == StateSource::Kind::Bloch && !cfg.source.bloch.is_pure();
  std::vector<QubitState> pure;
  if (!mixed) pure = cfg.source.pure_states();
  const std::size_t n_states = mixed ? 1 : pure.size();

  auto manifest = open_output(cfg.output_dir / "manifest.csv");
  manifest << "index,file,status,theta,phi,x,y,z,post_x,post_y,post_z,w_re,w_im,margin,mode,photon_budget,seed\n";
  int failures = 0;
  std::size_t index = 0;
  for (std::size_t s = 0; s < n_states; ++s) {
    const BlochVector r = mixed ? cfg.source.bloch : pure[s].bloch();
    for (const auto& f : cfg.postselections) {
      const auto file = image_name(index, cfg.image_format);
      std::string status = "ok";
      Complex w{NAN, NAN};
      double margin = NAN;
      try {
        w = weak_value_mixed(r, f).value;
        margin = weak_condition_margin(w, cfg.probe);
      } catch (const EstimationError&) {
      } catch (const DomainError&) {
      }
      if (std::isfinite(margin) && margin < cfg.margin_warning) err << warn_margin(margin, cfg.margin_warning, index) << '\n';

      std::optional<std::uint64_t> seed;
      try {
        auto img = mixed ? render_mixture(cfg.probe, r, cfg.sensor, cfg.mode, f)
                         : render_state(cfg.probe, pure[s], cfg.sensor, cfg.mode, f);
        if (cfg.noise.photon_budget) {
          seed = cfg.noise.seed + index;
          img = add_shot_noise(img, *cfg.noise.photon_budget, *seed);
        }
        img.provenance.command = command;
        for (const auto& w : img.warnings) err << "warning: " << file << ": " << w << '\n';
        write_image(cfg.output_dir / file, img, cfg.image_format);
      } catch (const std::filesystem::filesystem_error& e) {
        throw IoError(e.what());
      } catch (const std::ios_base::failure& e) {
        throw IoError(e.what());
      } catch (const std::exception& e) {
        status = e.what();
        ++failures;
        err << "error: image " << index << ": " << e.what() << '\n';
      }
      const auto theta = mixed ? std::string() : csv_number(pure[s].theta());
      const auto phi = mixed ? std::string() : csv_number(pure[s].phi());
      manifest << index << ',' << (status == "ok" ? file : "") << ",\"" << status << "\","
               << theta << ',' << phi << ','
               << csv_number(r.x) << ',' << csv_number(r.y) << ',' << csv_number(r.z) << ',' << csv_number(f.x) << ','
               << csv_number(f.y) << ',' << csv_number(f.z) << ',' << csv_number(w.real()) << ','
               << csv_number(w.imag()) << ',' << csv_number(margin) << ',' << to_string(cfg.mode) << ','
               << (cfg.noise.photon_budget ? csv_number(*cfg.noise.photon_budget) : "") << ','
               << (seed ? std::to_string(*seed) : "") << '\n';
      ++index;
    }
  }
  if (!manifest) throw IoError("failed writing manifest.csv");

  auto cal = open_output(cfg.output_dir / "calibration.json");
  cal << to_json(Calibration::identity(cfg.probe.coupling)).dump(2) << '\n';
  auto resolved = open_output(cfg.output_dir / "scenario.json");
  auto j = cfg.to_json();
  j["command"] = command;
  resolved << j.dump(2) << '\n';

  out << "wrote " << index << " image(s) to " << cfg.output_dir.string() << '\n';
  return failures ? kExitEstimation : kExitOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string cal;
  std::string postselect = "0,0,-1";
  std::vector<std::string> images;
  std::string out;
  double threshold = kDefaultZipThreshold;
};

int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
  if (args.images.empty()) throw ConfigError("IMAGES", "no images given");
  const auto cal = load_calibration(args.cal);
  const auto f = parse_vector(args.postselect);
  try {
    validate_postselection(f);
  } catch (const DomainError& e) {
    throw ConfigError("--postselect", e.what());
  }
  if (!(args.threshold > 0.0 && args.threshold < 0.5)) throw ConfigError("--threshold", "must lie in (0, 0.5)");

  std::ofstream file_out;
  if (!args.out.empty()) file_out = open_output(args.out);
  std::ostream& os = args.out.empty() ? out : file_out;

  os << "index,file,status,zip_x_mm,zip_y_mm,w_re,w_im,theta_est,phi_est,x,y,z,fidelity,residual_mm\n";
  int failures = 0;
  int ok = 0;
  int scored = 0;
  double fid_sum = 0.0;
  for (std::size_t k = 0; k < args.images.size(); ++k) {
    const auto& path = args.images[k];
    os << k << ',' << path << ',';
    try {
      const auto img = read_image(path);
      const auto zip = extract_zip(img, args.threshold);
      const auto w = estimate_weak_value(zip, cal);
      const auto est = estimate_state(zip, cal, f);
      const auto r = est.bloch();
      // Distance between the ZIP and the re-projected estimate; nonzero only when inversion clips.
      const double residual = distance(zip.position, cal.to_position(weak_value_mixed(r, f).value));
      std::optional<double> fid;
      if (img.provenance.state) {
        fid = fidelity(*img.provenance.state, est);
      } else if (img.provenance.bloch) {
        fid = fidelity(*img.provenance.bloch, r);
      }
      os << "ok," << csv_number(zip.position.x) << ',' << csv_number(zip.position.y) << ',' << csv_number(w.real())
         << ',' << csv_number(w.imag()) << ',' << csv_number(est.theta()) << ',' << csv_number(est.phi()) << ','
         << csv_number(r.x) << ',' << csv_number(r.y) << ',' << csv_number(r.z) << ','
         << (fid ? csv_number(*fid) : "") << ',' << csv_number(residual) << '\n';
      ++ok;
      if (fid) {
        fid_sum += *fid;
        ++scored;
      }
    } catch (const std::exception& e) {
      std::string msg = e.what();
      for (auto& c : msg) {
        if (c == '"' || c == '\n') c = '\'';
      }
      os << '"' << msg << "\",,,,,,,,,,,\n";
      err << "error: " << path << ": " << e.what() << '\n';
      ++failures;
    }
  }
  os << "mean,," << ok << '/' << args.images.size() << ",,,,,,,,,,"
     << (scored ? csv_number(fid_sum / scored) : "") << ",\n";
  return failures ? kExitEstimation : kExitOk;
}

// -------------------------------------------------------------------- tomo

int cmd_tomo(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const auto cfg = ScenarioConfig::load(config_path);
  if (cfg.source.kind != StateSource::Kind::Bloch) throw ConfigError("states.kind", "tomo needs a Bloch vector");
  if (cfg.postselections.size() < 2) throw ConfigError("postselections", "tomo needs at least two planes");

  const auto cal = Calibration::identity(cfg.probe.coupling);
  std::vector<Observation> obs;
  for (std::size_t k = 0; k < cfg.postselections.size(); ++k) {
    const auto& f = cfg.postselections[k];
    auto img = render_mixture(cfg.probe, cfg.source.bloch, cfg.sensor, cfg.mode, f);
    if (cfg.noise.photon_budget) img = add_shot_noise(img, *cfg.noise.photon_budget, cfg.noise.seed + k);
    for (const auto& w : img.warnings) err << "warning: plane " << k << ": " << w << '\n';
    obs.push_back({extract_zip(img, cfg.zip_threshold), cal, f});
  }
  const auto res = reconstruct_mixed(obs);
  json report = {{"bloch", to_json(res.bloch)},
                 {"residual", res.residual},
                 {"images_used", res.images_used},
                 {"clipped", res.clipped},
                 {"true_bloch", to_json(cfg.source.bloch)},
                 {"trace_distance", trace_distance(cfg.source.bloch, res.bloch)},
                 {"fidelity", fidelity(cfg.source.bloch, res.bloch)}};
  out << report.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------- centroid-check

struct CentroidGrid {
  std::vector<double> theta{kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2};
  std::vector<double> phi;
  std::vector<double> g_over_w0{0.0, 0.05, 0.5, 1.0};
  double w0 = 1.0;
  int resolution = 512;
  double tolerance = 1e-5;

  CentroidGrid() {
    for (int k = 0; k < 8; ++k) phi.push_back(0.3 + k * kPi / 4);
  }
};

CentroidGrid load_grid(const std::string& path) {
  CentroidGrid g;
  if (path.empty()) return g;
  std::ifstream is(path);
  if (!is) throw ConfigError("--grid", "cannot open " + path);
  try {
    const auto j = json::parse(is);
    g.theta = j.value("theta", g.theta);
    g.phi = j.value("phi", g.phi);
    g.g_over_w0 = j.value("g_over_w0", g.g_over_w0);
    g.w0 = j.value("w0_mm", g.w0);
    g.resolution = j.value("resolution", g.resolution);
    g.tolerance = j.value("tolerance", g.tolerance);
  } catch (const json::exception& e) {
    throw ConfigError("--grid", e.what());
  }
  if (g.theta.empty() || g.phi.empty() || g.g_over_w0.empty()) throw ConfigError("--grid", "empty axis");
  if (!(g.w0 > 0.0)) throw ConfigError("w0_mm", "must be positive");
  if (g.resolution < 64) throw ConfigError("resolution", "must be at least 64");
  return g;
}

int cmd_centroid_check(const std::string& grid_path, std::ostream& out, std::ostream& err) {
  const auto grid = load_grid(grid_path);
  const double tol = grid.tolerance * grid.w0;

  out << "theta,phi,g_over_w0,x_analytic,y_analytic,x_quadrature,y_quadrature,dev_x,dev_abs_y,sign,status\n";
  double max_dev = 0.0;
  int sign_pos = 0;
  int sign_neg = 0;
  int bad = 0;
  for (double th : grid.theta) {
    for (double ph : grid.phi) {
      for (double g : grid.g_over_w0) {
        ProbeConfig cfg{grid.w0, g * grid.w0, 1};
        std::string status = "ok";
        const auto st = [&] {
          try {
            return QubitState::from_angles(th, ph);
          } catch (const DomainError& e) {
            throw ConfigError("theta", e.what());
          }
        }();
        const auto field = exact_field(cfg, st);
        const auto an = analytic_centroid(cfg, st);
        // +-8 w0 around both displaced lobes leaves a tail far below the tolerance.
        const double extent = 16.0 * grid.w0 + 2.0 * cfg.coupling * std::max(1.0, 1.0 / std::tan(th));
        const auto q = centroid_by_quadrature(field, grid.resolution, extent);
        if (q.truncated) status = "truncated";
        const double dx = std::abs(q.centroid.x - an.x);
        const double dy = std::abs(std::abs(q.centroid.y) - std::abs(an.y));
        // Sign is only resolvable where the y offset clears the tolerance.
        int sign = 0;
        if (std::abs(an.y) > 10 * tol && std::abs(q.centroid.y) > 10 * tol) {
          // an.y already carries kCentroidYSign; divide it back out.
          sign = q.centroid.y * an.y * kCentroidYSign > 0 ? 1 : -1;
          (sign > 0 ? sign_pos : sign_neg)++;
        }
        max_dev = std::max({max_dev, dx, dy});
        if (dx > tol || dy > tol) {
          status = status == "ok" ? "deviation" : status + "+deviation";
          ++bad;
        }
        out << csv_number(th) << ',' << csv_number(ph) << ',' << csv_number(g) << ',' << csv_number(an.x) << ','
            << csv_number(an.y) << ',' << csv_number(q.centroid.x) << ',' << csv_number(q.centroid.y) << ','
            << csv_number(dx) << ',' << csv_number(dy) << ',' << sign << ',' << status << '\n';
      }
    }
  }
  const bool consistent = sign_pos == 0 || sign_neg == 0;
  const int s = sign_neg > sign_pos ? -1 : 1;
  err << "max deviation " << max_dev << " (tolerance " << tol << "); sign constant s = " << s
      << (consistent ? "" : " (INCONSISTENT across cells)") << '\n';
  return bad == 0 && consistent ? kExitOk : kExitCheckFailed;
}

// -------------------------------------------------------------------- path

int cmd_path(const std::string& which, int steps, std::ostream& out) {
  std::vector<QubitState> states;
  try {
    states = which == "equator" ? equator_path(steps) : infinity_path(steps);
  } catch (const DomainError& e) {
    throw ConfigError("--steps", e.what());
  }
  out << "index," << state_csv_header() << ",w_re,w_im\n";
  for (std::size_t k = 0; k < states.size(); ++k) {
    out << k << ',' << state_csv_row(states[k]) << ',';
    try {
      const auto w = weak_value_pure(states[k]).value;
      out << csv_number(w.real()) << ',' << csv_number(w.imag());
    } catch (const PoleStateError&) {
      out << ',';
    }
    out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak-value polarization imaging with optical vortices", "vortexwm"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Render post-selected probe images for a scenario");
  simulate->add_option("--config", sim.config, "Scenario JSON")->required();
  simulate->add_option("--out", sim.out, "Output directory (overrides output_dir)");
  simulate->add_option("--mode", sim.mode, "Field model")->check(CLI::IsMember({"exact", "approx"}));
  simulate->add_option("--seed", sim.seed, "Noise seed (overrides noise.seed)");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate states from images");
  estimate->add_option("--cal", est.cal, "Calibration JSON")->required();
  estimate->add_option("--postselect", est.postselect, "Post-selection Bloch vector x,y,z")->capture_default_str();
  estimate->add_option("--threshold", est.threshold, "ZIP threshold as a fraction of the peak")->capture_default_str();
  estimate->add_option("--out", est.out, "Write CSV here instead of stdout");
  estimate->add_option("images", est.images, "Image files (.pgm or .csv)");

  std::string tomo_config;
  auto* tomo = app.add_subcommand("tomo", "Reconstruct a mixed state from several post-selection planes");
  tomo->add_option("--config", tomo_config, "Scenario JSON with a Bloch vector")->required();

  std::string grid;
  auto* check = app.add_subcommand("centroid-check", "Compare closed-form centroids against quadrature");
  check->add_option("--grid", grid, "Grid JSON {theta, phi, g_over_w0, w0_mm, resolution}");

  std::string which;
  int steps = 0;
  auto* path = app.add_subcommand("path", "Print the states of a preparation path");
  path->add_option("kind", which, "equator | infinity")->required()->check(CLI::IsMember({"equator", "infinity"}));
  path->add_option("--steps", steps, "Number of samples")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto command = join_args(argc, argv);
  try {
    if (*simulate) return cmd_simulate(sim, command, out, err);
    if (*estimate) return cmd_estimate(est, out, err);
    if (*tomo) return cmd_tomo(tomo_config, out, err);
    if (*check) return cmd_centroid_check(grid, out, err);
    if (*path) return cmd_path(which, steps, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    if (e.field() == "IMAGES") err << "usage: vortexwm estimate --cal FILE --postselect x,y,z IMAGES...\n";
    return kExitUsage;
  } catch (const PointAtInfinityError& e) {
    err << "estimation error: " << e.what() << "; re-image with a different post-selection plane\n";
    return kExitEstimation;
  } catch (const DegenerateGeometry& e) {
    err << "estimation error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const EstimationError& e) {
    err << "estimation error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace vortexwm
