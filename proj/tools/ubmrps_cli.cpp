// Copyright 2026 The ubmrps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ubmrps command-line front end. Exit codes: 0 success, 1 validation
// failure, 2 usage / configuration / input error, 3 numeric or internal
// error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ubmrps/json_writer.hpp"
#include "ubmrps/ubmrps.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

// Stream used for `--init haar`, away from trajectory streams.
constexpr std::uint64_t kHaarInitStream = 0xB000'0000'0000'0000ULL;

constexpr double kStateFileTolerance = 1e-8;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
  ApiError(ubm_status s, const std::string& what)
      : std::runtime_error(what), status(s) {}
  ubm_status status;
};

void check(ubm_status s, const char* what) {
  if (s != UBM_OK) {
    throw ApiError(s, std::string(what) + ": " + ubm_last_error());
  }
}

struct Options {
  int n = 4;
  std::optional<double> t;
  std::string tgrid;
  std::string init = "e1";
  std::uint64_t seed = 42;
  double step = 0.005;
  std::size_t m = 0;
  std::string out = "-";
  std::string format = "json";
  std::string carry = "matrix";
  int p = 1;
  int j = 1;
  int k = 2;
  std::string observable_file;
  std::string lgrid = "-5:0.5:5";
  int n_max = 60;
  double threshold = 5.0;
  std::string batteries = "all";
  bool list = false;
};

struct Ensemble {
  ubm_ensemble* handle = nullptr;
  Ensemble() = default;
  Ensemble(const Ensemble&) = delete;
  Ensemble& operator=(const Ensemble&) = delete;
  Ensemble(Ensemble&& o) noexcept : handle(o.handle) { o.handle = nullptr; }
  ~Ensemble() { ubm_ensemble_free(handle); }
};

double parse_number(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw UsageError(std::string("bad number in ") + what + ": '" + s + "'");
  }
  return v;
}

// `start:step:end` gives start + i*step for i = 0, 1, ... while the point
// stays within end (with a 1e-9 relative allowance on the last index);
// a comma list or a single number is taken literally.
std::vector<double> parse_grid(const std::string& text, const char* what) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) {
      throw UsageError(std::string(what) + " must be start:step:end");
    }
    const double start = parse_number(parts[0], what);
    const double step = parse_number(parts[1], what);
    const double end = parse_number(parts[2], what);
    if (!(step > 0.0) || end < start) {
      throw UsageError(std::string(what) + " needs step > 0 and end >= start");
    }
    const double span = (end - start) / step;
    if (span > 1e7) throw UsageError(std::string(what) + " has too many points");
    const long count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) out.push_back(start + i * step);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, what));
  }
  if (out.empty()) throw UsageError(std::string(what) + " is empty");
  return out;
}

std::vector<double> time_grid(const Options& o) {
  if (!o.tgrid.empty() && o.t) throw UsageError("give either --t or --tgrid");
  std::vector<double> times;
  if (!o.tgrid.empty()) {
    times = parse_grid(o.tgrid, "--tgrid");
  } else if (o.t) {
    times = {*o.t};
  } else {
    throw UsageError("--t or --tgrid is required");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0) throw UsageError("times must be >= 0");
    if (i > 0 && times[i] < times[i - 1]) {
      throw UsageError("times must be non-decreasing");
    }
  }
  return times;
}

nlohmann::json read_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw UsageError(std::string("cannot read ") + what + " '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed ") + what + " '" + path +
                     "': " + e.what());
  }
}

std::vector<double> complex_pair(const nlohmann::json& v, const char* what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
      !v[1].is_number()) {
    throw UsageError(std::string(what) + ": entries must be [re, im] pairs");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

// Interleaved amplitudes of the initial state.
std::vector<double> initial_state(const Options& o) {
  if (o.n < 1) throw UsageError("--N must be >= 1");
  const std::size_t n = static_cast<std::size_t>(o.n);
  std::vector<double> psi(2 * n, 0.0);
  if (o.init == "uniform") {
    for (std::size_t j = 0; j < n; ++j) psi[2 * j] = 1.0 / std::sqrt(double(n));
    return psi;
  }
  if (o.init == "haar") {
    check(ubm_haar_state(o.n, o.seed, kHaarInitStream, psi.data()),
          "haar state");
    return psi;
  }
  if (o.init.size() >= 2 && o.init[0] == 'e' &&
      o.init.find_first_not_of("0123456789", 1) == std::string::npos) {
    const long idx = std::stol(o.init.substr(1));
    if (idx < 1 || idx > o.n) {
      throw UsageError("--init " + o.init + " is outside 1..N");
    }
    psi[2 * (idx - 1)] = 1.0;
    return psi;
  }
  const nlohmann::json doc = read_json_file(o.init, "state file");
  if (!doc.is_array() || doc.size() != n) {
    throw UsageError("state file must hold N = " + std::to_string(n) +
                     " [re, im] pairs");
  }
  double norm2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto z = complex_pair(doc[j], "state file");
    psi[2 * j] = z[0];
    psi[2 * j + 1] = z[1];
    norm2 += z[0] * z[0] + z[1] * z[1];
  }
  const double norm = std::sqrt(norm2);
  if (!(std::abs(norm - 1.0) <= kStateFileTolerance)) {
    std::ostringstream os;
    os << "state file norm " << norm << " differs from 1 by more than "
       << kStateFileTolerance;
    throw UsageError(os.str());
  }
  for (double& x : psi) x /= norm;
  return psi;
}

std::vector<double> read_matrix(const std::string& path, int n) {
  if (path.empty()) throw UsageError("--A is required");
  const nlohmann::json doc = read_json_file(path, "matrix file");
  const std::size_t nn = static_cast<std::size_t>(n);
  if (!doc.is_array() || doc.size() != nn) {
    throw UsageError("matrix file must hold N rows");
  }
  std::vector<double> a(2 * nn * nn);
  for (std::size_t r = 0; r < nn; ++r) {
    if (!doc[r].is_array() || doc[r].size() != nn) {
      throw UsageError("matrix file rows must hold N [re, im] pairs");
    }
    for (std::size_t c = 0; c < nn; ++c) {
      const auto z = complex_pair(doc[r][c], "matrix file");
      a[2 * (r * nn + c)] = z[0];
      a[2 * (r * nn + c) + 1] = z[1];
    }
  }
  return a;
}

ubm_integrator_config integrator(const Options& o) {
  ubm_integrator_config cfg;
  ubm_integrator_config_default(&cfg);
  cfg.step_size = o.step;
  if (o.carry == "matrix") {
    cfg.carry = UBM_CARRY_MATRIX;
  } else if (o.carry == "vector") {
    cfg.carry = UBM_CARRY_VECTOR;
  } else {
    throw UsageError("--carry must be matrix or vector");
  }
  return cfg;
}

void write_output(const Options& o, const std::string& text) {
  if (o.out == "-" || o.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + o.out + "'");
  f << text;
  if (!f) throw UsageError("write to '" + o.out + "' failed");
}

void write_state_array(ubmrps::JsonWriter& w, const std::vector<double>& psi) {
  w.begin_array();
  for (std::size_t j = 0; j + 1 < psi.size(); j += 2) {
    w.begin_array().value(psi[j]).value(psi[j + 1]).end_array();
  }
  w.end_array();
}

void write_config(ubmrps::JsonWriter& w, const std::string& command,
                  const Options& o, const std::vector<double>& psi,
                  const std::vector<double>* times) {
  w.key("config").begin_object();
  w.field("command", command);
  w.field("version", ubm_version());
  w.field("N", o.n);
  if (times) {
    w.key("tgrid").begin_array();
    for (double t : *times) w.value(t);
    w.end_array();
  }
  w.field("init", o.init);
  w.key("initial_state");
  write_state_array(w, psi);
  w.field("seed", o.seed);
  w.field("step", o.step);
  w.field("carry", o.carry);
  w.field("M", static_cast<std::uint64_t>(o.m));
  w.field("format", o.format);
  if (command == "moments" || command == "entropy") w.field("p", o.p);
  if (command == "moments" || command == "covariance" || command == "laplace") {
    w.field("j", o.j);
  }
  if (command == "covariance") w.field("k", o.k);
  if (command == "observable") w.field("A", o.observable_file);
  if (command == "laplace") {
    w.field("lgrid", o.lgrid);
    w.field("n_max", o.n_max);
  }
  w.end_object();
}

struct Row {
  double x;
  double value;
  double mc_mean = std::numeric_limits<double>::quiet_NaN();
  double mc_se = std::numeric_limits<double>::quiet_NaN();
};

std::string render_rows(const std::string& command, const Options& o,
                        const std::vector<double>& psi,
                        const std::vector<double>* times,
                        const std::vector<Row>& rows, bool with_mc,
                        const char* x_name) {
  if (o.format == "csv") {
    std::string s = std::string(x_name) + ",value";
    if (with_mc) s += ",mc_mean,mc_se";
    s += "\n";
    for (const Row& r : rows) {
      s += ubmrps::format_double(r.x) + "," + ubmrps::format_double(r.value);
      if (with_mc) {
        s += "," + ubmrps::format_double(r.mc_mean) + "," +
             ubmrps::format_double(r.mc_se);
      }
      s += "\n";
    }
    return s;
  }
  ubmrps::JsonWriter w;
  w.begin_object();
  write_config(w, command, o, psi, times);
  w.key("rows").begin_array();
  for (const Row& r : rows) {
    w.begin_object();
    w.field(x_name, r.x);
    w.field("value", r.value);
    if (with_mc) {
      w.field("mc_mean", r.mc_mean);
      w.field("mc_se", r.mc_se);
    }
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

void check_format(const Options& o) {
  if (o.format != "json" && o.format != "csv") {
    throw UsageError("--format must be json or csv");
  }
}

double component(const std::vector<double>& psi, int j) {
  const std::size_t i = 2 * static_cast<std::size_t>(j - 1);
  return psi[i] * psi[i] + psi[i + 1] * psi[i + 1];
}

void check_index(const Options& o, int j, const char* flag) {
  if (j < 1 || j > o.n) {
    throw UsageError(std::string(flag) + " must lie in 1..N");
  }
}

std::vector<Ensemble> sample_path(const Options& o,
                                  const std::vector<double>& psi,
                                  const std::vector<double>& times) {
  std::vector<ubm_ensemble*> raw(times.size(), nullptr);
  const ubm_integrator_config cfg = integrator(o);
  check(ubm_ensemble_sample_path(o.n, psi.data(), times.data(), times.size(),
                                 o.m, &cfg, o.seed, raw.data()),
        "sampling");
  std::vector<Ensemble> out(times.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i].handle = raw[i];
  return out;
}

// Shared shape of moments / covariance / observable / entropy.
template <class Analytic, class Estimator>
int run_curve(const std::string& command, const Options& o,
              Analytic&& analytic, Estimator&& estimator) {
  check_format(o);
  const std::vector<double> psi = initial_state(o);
  const std::vector<double> times = time_grid(o);
  std::vector<Row> rows;
  for (double t : times) rows.push_back(Row{t, analytic(psi, t)});
  const bool with_mc = o.m > 0;
  if (with_mc) {
    const auto ensembles = sample_path(o, psi, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      ubm_estimate e;
      estimator(ensembles[i].handle, &e);
      rows[i].mc_mean = e.value;
      rows[i].mc_se = e.std_error;
    }
  }
  write_output(o, render_rows(command, o, psi, &times, rows, with_mc, "t"));
  return kExitOk;
}

int cmd_sample(const Options& o) {
  check_format(o);
  if (!o.t || !o.tgrid.empty()) throw UsageError("sample needs --t");
  if (o.m == 0) throw UsageError("sample needs --M >= 1");
  const std::vector<double> psi = initial_state(o);
  const ubm_integrator_config cfg = integrator(o);
  Ensemble e;
  check(ubm_ensemble_sample(o.n, psi.data(), *o.t, o.m, &cfg, o.seed,
                            &e.handle),
        "sampling");
  ubm_stats stats;
  check(ubm_ensemble_stats(e.handle, &stats), "stats");
  std::vector<double> state(2 * static_cast<std::size_t>(o.n));
  if (o.format == "csv") {
    std::string s = "sample,j,re,im\n";
    for (std::size_t k = 0; k < o.m; ++k) {
      check(ubm_ensemble_state(e.handle, k, state.data()), "state");
      for (int j = 0; j < o.n; ++j) {
        s += std::to_string(k) + "," + std::to_string(j + 1) + "," +
             ubmrps::format_double(state[2 * j]) + "," +
             ubmrps::format_double(state[2 * j + 1]) + "\n";
      }
    }
    write_output(o, s);
    return kExitOk;
  }
  ubmrps::JsonWriter w;
  w.begin_object();
  write_config(w, "sample", o, psi, nullptr);
  w.key("metadata").begin_object();
  w.field("N", o.n);
  w.field("t", *o.t);
  w.field("seed", o.seed);
  w.field("step_size", o.step);
  w.field("version", ubm_version());
  w.field("max_unitarity_defect", stats.max_unitarity_defect);
  w.field("max_norm_defect", stats.max_norm_defect);
  w.field("reunitarizations", stats.reunitarizations);
  w.end_object();
  w.key("states").begin_array();
  for (std::size_t k = 0; k < o.m; ++k) {
    check(ubm_ensemble_state(e.handle, k, state.data()), "state");
    write_state_array(w, state);
  }
  w.end_array();
  w.end_object();
  write_output(o, w.str() + "\n");
  return kExitOk;
}

int cmd_moments(const Options& o) {
  check_index(o, o.j, "--j");
  if (o.p < 1) throw UsageError("--p must be >= 1");
  return run_curve(
      "moments", o,
      [&](const std::vector<double>& psi, double t) {
        double v;
        check(ubm_moment(o.n, component(psi, o.j), o.p, t, &v), "moment");
        return v;
      },
      [&](const ubm_ensemble* e, ubm_estimate* out) {
        check(ubm_estimate_moment(e, o.j, o.p, out), "estimate");
      });
}

int cmd_covariance(const Options& o) {
  check_index(o, o.j, "--j");
  check_index(o, o.k, "--k");
  if (o.j == o.k) throw UsageError("--j and --k must differ");
  return run_curve(
      "covariance", o,
      [&](const std::vector<double>& psi, double t) {
        const double cj = component(psi, o.j);
        const double ck = component(psi, o.k);
        double v;
        check(ubm_covariance(o.n, cj, ck, cj * ck, t, &v), "covariance");
        return v;
      },
      [&](const ubm_ensemble* e, ubm_estimate* out) {
        check(ubm_estimate_covariance(e, o.j, o.k, out), "estimate");
      });
}

int cmd_observable(const Options& o) {
  const std::vector<double> a = read_matrix(o.observable_file, o.n);
  return run_curve(
      "observable", o,
      [&](const std::vector<double>& psi, double t) {
        double v;
        check(ubm_observable_average(o.n, a.data(), psi.data(), t, &v),
              "observable");
        return v;
      },
      [&](const ubm_ensemble* e, ubm_estimate* out) {
        check(ubm_estimate_observable(e, a.data(), out), "estimate");
      });
}

int cmd_entropy(const Options& o) {
  if (o.p < 2) throw UsageError("entropy needs --p >= 2");
  return run_curve(
      "entropy", o,
      [&](const std::vector<double>& psi, double t) {
        double v;
        check(ubm_renyi_bound(o.n, psi.data(), o.p, t, &v), "entropy bound");
        return v;
      },
      [&](const ubm_ensemble* e, ubm_estimate* out) {
        check(ubm_estimate_renyi(e, o.p, out), "estimate");
      });
}

int cmd_laplace(const Options& o) {
  check_format(o);
  check_index(o, o.j, "--j");
  const std::vector<double> psi = initial_state(o);
  const double t = o.t.value_or(0.0);
  if (t < 0.0) throw UsageError("--t must be >= 0");
  const double c = component(psi, o.j);
  std::vector<Row> rows;
  for (double lambda : parse_grid(o.lgrid, "--lgrid")) {
    double v;
    check(ubm_laplace_marginal(o.n, c, t, lambda, o.n_max, &v), "laplace");
    rows.push_back(Row{lambda, v});
  }
  const std::vector<double> times{t};
  write_output(o, render_rows("laplace", o, psi, &times, rows, false,
                              "lambda"));
  return kExitOk;
}

unsigned parse_batteries(const std::string& text) {
  static const std::pair<const char*, unsigned> kNames[] = {
      {"moments", UBM_BATTERY_MOMENTS},
      {"covariances", UBM_BATTERY_COVARIANCES},
      {"observable", UBM_BATTERY_OBSERVABLE},
      {"entropy", UBM_BATTERY_ENTROPY},
      {"invariance", UBM_BATTERY_INVARIANCE},
      {"inversion", UBM_BATTERY_INVERSION},
      {"haar", UBM_BATTERY_HAAR},
      {"all", UBM_BATTERY_ALL},
  };
  unsigned mask = 0;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    bool found = false;
    for (const auto& [name, bit] : kNames) {
      if (item == name) {
        mask |= bit;
        found = true;
      }
    }
    if (!found) throw UsageError("unknown battery '" + item + "'");
  }
  if (mask == 0) throw UsageError("--batteries is empty");
  return mask;
}

int cmd_validate(const Options& o) {
  if (o.format != "json") throw UsageError("validate writes json only");
  ubm_validation_config cfg;
  ubm_validation_config_default(&cfg);
  std::vector<double> times;
  if (!o.tgrid.empty() || o.t) {
    times = time_grid(o);
    cfg.times = times.data();
    cfg.n_times = times.size();
  }
  std::vector<double> psi;
  if (o.init != "e1") {
    psi = initial_state(o);
    cfg.initial = psi.data();
  }
  cfg.dim = o.n;
  cfg.seed = o.seed;
  if (o.m > 0) cfg.samples = o.m;
  cfg.threshold = o.threshold;
  cfg.integrator = integrator(o);
  cfg.batteries = parse_batteries(o.batteries);

  if (o.list) {
    std::size_t needed = 0;
    check(ubm_validation_check_names(&cfg, nullptr, 0, &needed), "list");
    std::string buf(needed, '\0');
    check(ubm_validation_check_names(&cfg, buf.data(), buf.size(), &needed),
          "list");
    buf.resize(needed - 1);
    write_output(o, buf);
    return kExitOk;
  }

  ubm_validation* v = nullptr;
  check(ubm_validation_run(&cfg, &v), "validation");
  std::unique_ptr<ubm_validation, void (*)(ubm_validation*)> guard(
      v, ubm_validation_free);
  const char* json = nullptr;
  check(ubm_validation_json(v, &json), "report");
  write_output(o, json);
  std::size_t count = 0;
  check(ubm_validation_report_count(v, &count), "report");
  int failures = 0;
  for (std::size_t i = 0; i < count; ++i) {
    ubm_report r;
    check(ubm_validation_report(v, i, &r), "report");
    if (!r.pass) {
      ++failures;
      std::cerr << "FAIL " << r.name << " z=" << r.z_score
                << " threshold=" << r.threshold << "\n";
    }
  }
  if (failures > 0) {
    std::cerr << failures << " of " << count << " checks failed\n";
    return kExitValidation;
  }
  return kExitOk;
}

void add_common(CLI::App* sub, Options& o, bool with_time = true) {
  sub->add_option("--N", o.n, "Dimension N")->check(CLI::Range(1, 1 << 12));
  if (with_time) {
    sub->add_option("--t", o.t, "Single time");
    sub->add_option("--tgrid", o.tgrid,
                    "Time grid start:step:end (points start + i*step) or a "
                    "comma list");
  }
  sub->add_option("--init", o.init,
                  "Initial state: e1, e<k>, uniform, haar or a JSON file of "
                  "[re, im] pairs");
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--step", o.step, "Integrator step size");
  sub->add_option("--carry", o.carry, "matrix or vector");
  sub->add_option("--out", o.out, "Output path, '-' for stdout");
  sub->add_option("--format", o.format, "json or csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random pure states from unitary Brownian motion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ubm_version()));
  Options o;

  auto* sample = app.add_subcommand("sample", "Sample psi_t");
  add_common(sample, o);
  sample->add_option("--M", o.m, "Number of samples")->required();

  auto* moments = app.add_subcommand("moments", "E |psi_t^j|^{2p} over a t-grid");
  add_common(moments, o);
  moments->add_option("--p", o.p, "Moment order");
  moments->add_option("--j", o.j, "One-based coordinate");

  auto* covariance =
      app.add_subcommand("covariance", "E |psi_t^j|^2 |psi_t^k|^2");
  add_common(covariance, o);
  covariance->add_option("--j", o.j, "One-based coordinate");
  covariance->add_option("--k", o.k, "One-based coordinate");

  auto* observable = app.add_subcommand("observable", "E <psi_t, A psi_t>");
  add_common(observable, o);
  observable->add_option("--A", o.observable_file,
                         "JSON file: N rows of N [re, im] pairs")
      ->required();

  auto* entropy =
      app.add_subcommand("entropy", "Lower bound on the mean Renyi entropy");
  add_common(entropy, o);
  o.p = 1;
  entropy->add_option("--p", o.p, "Renyi order (>= 2)");

  for (auto* sub : {moments, covariance, observable, entropy}) {
    sub->add_option("--M,--mc", o.m, "Add Monte Carlo columns from M samples");
  }

  auto* laplace = app.add_subcommand("laplace",
                                     "E exp(lambda |psi_t^j|^2) over a lambda-grid");
  add_common(laplace, o);
  laplace->add_option("--j", o.j, "One-based coordinate");
  laplace->add_option("--lgrid", o.lgrid, "Lambda grid start:step:end");
  laplace->add_option("--nmax", o.n_max, "Series truncation index");

  auto* validate = app.add_subcommand("validate", "Run the validation battery");
  add_common(validate, o);
  validate->add_option("--M", o.m, "Trajectories for the t-grid checks");
  validate->add_option("--threshold", o.threshold, "z threshold");
  validate->add_option("--batteries", o.batteries,
                       "Comma list of moments, covariances, observable, "
                       "entropy, invariance, inversion, haar, all");
  validate->add_flag("--list", o.list, "Print check names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (entropy->parsed() && o.p == 1) o.p = 2;
    if (sample->parsed()) return cmd_sample(o);
    if (moments->parsed()) return cmd_moments(o);
    if (covariance->parsed()) return cmd_covariance(o);
    if (observable->parsed()) return cmd_observable(o);
    if (entropy->parsed()) return cmd_entropy(o);
    if (laplace->parsed()) return cmd_laplace(o);
    if (validate->parsed()) return cmd_validate(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.status) {
      case UBM_ERR_INVALID_ARGUMENT:
      case UBM_ERR_CONFIG:
      case UBM_ERR_IO:
        return kExitUsage;
      default:
        return kExitNumeric;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
