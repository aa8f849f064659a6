#include "epchiral/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <vector>

#include <json.hpp>

#include "epchiral/averaging.hpp"
#include "epchiral/emit.hpp"
#include "epchiral/ep_locator.hpp"
#include "epchiral/loop.hpp"
#include "epchiral/model.hpp"
#include "epchiral/version.hpp"

namespace epchiral {

namespace {

using json = nlohmann::json;

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = first + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out))
    throw ConfigError("key '" + key + "': expected a finite number, got '" +
                      value + "'");
  return out;
}

long long to_count(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v < 1.0 || v != std::floor(v) || v > 9e15)
    throw ConfigError("key '" + key + "': expected a positive integer, got '" +
                      value + "'");
  return static_cast<long long>(v);
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    std::size_t comma = value.find(',', pos);
    if (comma == std::string::npos) comma = value.size();
    std::string item = value.substr(pos, comma - pos);
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos)
      throw ConfigError("key '" + key + "': empty list entry");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(to_double(key, item.substr(b, e - b + 1)));
    pos = comma + 1;
  }
  return out;
}

Vec3c to_vec3c(const std::string& key, const std::string& value) {
  const std::vector<double> v = to_list(key, value);
  if (v.size() != 6)
    throw ConfigError("key '" + key +
                      "': expected six numbers (re,im per component)");
  return Vec3c{Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(v[4], v[5])};
}

struct TypedKey {
  const char* key;
  char kind;  // 'n' number, 'i' positive integer, 'l' list, 'v' 3 complex, 'e' enum
  std::vector<const char*> allowed{};
};

const std::vector<TypedKey>& typed_keys(Experiment e) {
  static const std::vector<TypedKey> ep_locate = {
      {"gamma1", 'n'}, {"gamma2", 'n'}, {"ratio", 'n'}, {"tolerance", 'n'}};
  static const std::vector<TypedKey> ratio_sweep = {{"gamma1", 'n'},
                                                    {"ratios", 'l'}};
  static const std::vector<TypedKey> map_keys = {
      {"gamma1", 'n'},      {"gamma2", 'n'},    {"delta_min", 'n'},
      {"delta_max", 'n'},   {"omega_min", 'n'}, {"omega_max", 'n'},
      {"delta_count", 'i'}, {"omega_count", 'i'}};
  static const std::vector<TypedKey> encircle = {
      {"gamma1", 'n'},
      {"gamma2", 'n'},
      {"loop_time", 'n'},
      {"rel_tol", 'n'},
      {"abs_tol", 'n'},
      {"center_delta", 'n'},
      {"center_omega", 'n'},
      {"radius", 'n'},
      {"samples", 'i'},
      {"min_track_samples", 'i'},
      {"enantiomer", 'e', {"right", "left"}},
      {"direction", 'e', {"as-written", "reversed"}},
      {"initial", 'e', {"plus", "minus", "mixed"}}};
  static const std::vector<TypedKey> loop_sweep = {
      {"gamma1", 'n'},
      {"gamma2", 'n'},
      {"loop_times", 'l'},
      {"center_delta", 'n'},
      {"center_omega", 'n'},
      {"radius", 'n'},
      {"initial", 'e', {"plus", "minus"}}};
  static const std::vector<TypedKey> average = {
      {"mode", 'e', {"canonical", "random", "custom"}},
      {"samples", 'i'},
      {"draws", 'i'},
      {"shards", 'i'},
      {"d1e", 'v'},
      {"d2e", 'v'},
      {"d12", 'v'},
      {"f1", 'v'},
      {"f2", 'v'},
      {"f3", 'v'},
      {"e1", 'n'},
      {"e2", 'n'},
      {"omega2", 'n'},
      {"omega3", 'n'}};
  static const std::vector<TypedKey> scaling_probe = {
      {"gamma1", 'n'},
      {"gamma2", 'n'},
      {"control", 'e', {"ep", "diabolical"}},
      {"direction_delta", 'n'},
      {"direction_omega", 'n'},
      {"eps_min_scale", 'n'},
      {"eps_max_scale", 'n'},
      {"eps_count", 'i'}};
  switch (e) {
    case Experiment::EpLocate: return ep_locate;
    case Experiment::RatioSweep: return ratio_sweep;
    case Experiment::EigengapMap: return map_keys;
    case Experiment::Encircle: return encircle;
    case Experiment::LoopSweep: return loop_sweep;
    case Experiment::Average: return average;
    case Experiment::ScalingProbe: return scaling_probe;
  }
  return ep_locate;
}

using ParamMap = std::map<std::string, std::string>;

bool has(const ParamMap& p, const std::string& key) { return p.count(key) != 0; }

double num(const ParamMap& p, const std::string& key) {
  return to_double(key, p.at(key));
}

long long count_of(const ParamMap& p, const std::string& key) {
  return to_count(key, p.at(key));
}

std::string file_in(const RunConfig& config, const std::string& name) {
  return (std::filesystem::path(config.output_dir) / name).string();
}

const char* handedness_name(Handedness h) {
  return h == Handedness::Right ? "right" : "left";
}

const char* direction_name(Direction d) {
  return d == Direction::AsWritten ? "as-written" : "reversed";
}

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

// CSV and/or JSON per the configured format; record-style outputs bypass this.
void emit_table(const RunConfig& config, std::vector<std::string>& files,
                const std::string& stem, const std::string& header,
                const std::vector<std::vector<std::string>>& rows,
                const json& as_json) {
  if (config.output_format != OutputFormat::Json) {
    const std::string name = stem + ".csv";
    write_csv(file_in(config, name), header, rows);
    files.push_back(name);
  }
  if (config.output_format != OutputFormat::Csv) {
    const std::string name = stem + ".json";
    write_text(file_in(config, name), as_json.dump(2) + "\n");
    files.push_back(name);
  }
}

void emit_record(const RunConfig& config, std::vector<std::string>& files,
                 const std::string& name, const json& doc) {
  write_text(file_in(config, name), doc.dump(2) + "\n");
  files.push_back(name);
}

// ---- runners ----

void run_ep_locate(const RunConfig& config, ParamMap& p,
                   std::vector<std::string>& files) {
  const double g1 = num(p, "gamma1");
  const double g2 = has(p, "gamma2") ? num(p, "gamma2") : num(p, "ratio") * g1;
  const double tol = has(p, "tolerance") ? num(p, "tolerance") : -1.0;

  json records = json::array();
  for (Handedness h : {Handedness::Right, Handedness::Left}) {
    for (const EPPoint& cf : closed_form_eps(g1, g2, h)) {
      EPPoint refined;
      bool converged = true;
      try {
        refined = refine_ep(cf, g1, g2, h, tol);
      } catch (const EpRefineError& e) {
        refined = e.best;
        converged = false;
      }
      json rec;
      rec["enantiomer"] = handedness_name(h);
      rec["branch"] = cf.branch_index;
      rec["closed_form"] = {{"delta", cf.delta},
                            {"omega12", cf.omega12},
                            {"residual", cf.residual}};
      rec["refined"] = {{"delta", refined.delta},
                        {"omega12", refined.omega12},
                        {"residual", refined.residual}};
      rec["displacement"] =
          std::hypot(refined.delta - cf.delta, refined.omega12 - cf.omega12);
      rec["converged"] = converged;
      records.push_back(rec);
    }
  }
  json doc;
  doc["gamma1"] = g1;
  doc["gamma2"] = g2;
  doc["records"] = records;
  emit_record(config, files, "ep_locate.json", doc);
}

void run_ratio_sweep(const RunConfig& config, ParamMap& p,
                     std::vector<std::string>& files) {
  const SweepTable table =
      ratio_sweep(num(p, "gamma1"), to_list("ratios", p.at("ratios")));
  std::vector<std::vector<std::string>> rows;
  json jrows = json::array();
  for (const SweepRow& r : table.rows) {
    rows.push_back({format_double(r.ratio), format_double(r.gamma2),
                    handedness_name(r.handedness),
                    std::to_string(r.branch_index), format_double(r.delta_ep),
                    format_double(r.omega12_ep)});
    json jr;
    jr["ratio"] = r.ratio;
    jr["gamma2"] = r.gamma2;
    jr["enantiomer"] = handedness_name(r.handedness);
    jr["branch"] = r.branch_index;
    jr["delta_ep"] = r.delta_ep;
    jr["omega12_ep"] = r.omega12_ep;
    jr["converged"] = r.converged;
    jrows.push_back(jr);
  }
  emit_table(config, files, "ratio_sweep",
             "ratio,gamma2,enantiomer,branch,delta_ep,omega12_ep", rows, jrows);
}

void run_map(const RunConfig& config, ParamMap& p,
             std::vector<std::string>& files) {
  const std::vector<GapNode> nodes = eigengap_map(
      num(p, "gamma1"), num(p, "gamma2"), num(p, "delta_min"),
      num(p, "delta_max"), static_cast<int>(count_of(p, "delta_count")),
      num(p, "omega_min"), num(p, "omega_max"),
      static_cast<int>(count_of(p, "omega_count")));
  const auto clamp16 = [](double v) { return std::max(v, -16.0); };
  std::vector<std::vector<std::string>> rows;
  rows.reserve(nodes.size());
  json jrows = json::array();
  for (const GapNode& n : nodes) {
    rows.push_back({format_double(n.v1), format_double(n.v2),
                    format_double(clamp16(n.log10_gap_right)),
                    format_double(clamp16(n.log10_gap_left))});
    json jr;
    jr["delta"] = n.v1;
    jr["omega12"] = n.v2;
    jr["log10_gap_R"] = clamp16(n.log10_gap_right);
    jr["log10_gap_L"] = clamp16(n.log10_gap_left);
    jrows.push_back(jr);
  }
  emit_table(config, files, "eigengap_map",
             "delta,omega12,log10_gap_R,log10_gap_L", rows, jrows);
}

// Shared by encircle and loop-sweep: default loop center is the refined
// Right-enantiomer EP with omega12 < 0 (the one the drive can reach with a
// loop touching omega12 = 0), radius |center_omega| unless overridden.
void resolve_loop_geometry(ParamMap& p, double g1, double g2,
                           EncirclementPath& path) {
  if (has(p, "center_delta") != has(p, "center_omega"))
    throw ConfigError("give both center_delta and center_omega, or neither");
  if (has(p, "center_delta")) {
    path.center_delta = num(p, "center_delta");
    path.center_omega = num(p, "center_omega");
  } else {
    const std::array<EPPoint, 2> cfs =
        closed_form_eps(g1, g2, Handedness::Right);
    const EPPoint* pick = nullptr;
    for (const EPPoint& cf : cfs)
      if (cf.omega12 < 0.0) pick = &cf;
    if (!pick)
      throw ConfigError(
          "default loop center needs an EP with omega12 < 0 (equal widths "
          "have none); give center_delta/center_omega/radius explicitly");
    const EPPoint ep = refine_ep(*pick, g1, g2, Handedness::Right);
    path.center_delta = ep.delta;
    path.center_omega = ep.omega12;
  }
  path.radius =
      has(p, "radius") ? num(p, "radius") : std::abs(path.center_omega);
  p["center_delta"] = format_double(path.center_delta);
  p["center_omega"] = format_double(path.center_omega);
  p["radius"] = format_double(path.radius);
}

void run_encircle(const RunConfig& config, ParamMap& p,
                  std::vector<std::string>& files) {
  const double g1 = num(p, "gamma1");
  const double g2 = num(p, "gamma2");
  const Handedness h =
      p.at("enantiomer") == "right" ? Handedness::Right : Handedness::Left;
  const EffectiveParams params = make_params(g1, g2, 0.0, 0.0, h);

  EncirclementPath path;
  path.loop_time = num(p, "loop_time");
  path.direction = p.at("direction") == "as-written" ? Direction::AsWritten
                                                     : Direction::Reversed;
  resolve_loop_geometry(p, g1, g2, path);

  const int samples = static_cast<int>(count_of(p, "samples"));
  const int min_track = static_cast<int>(count_of(p, "min_track_samples"));
  const double rel = num(p, "rel_tol"), abs_tol = num(p, "abs_tol");

  InitialState initial = InitialState::PlusState;
  std::optional<Vec2> c0;
  const std::string& ini = p.at("initial");
  if (ini == "minus") {
    initial = InitialState::MinusState;
  } else if (ini == "mixed") {
    initial = InitialState::Custom;
    const auto [d0, o0] = path_point(path, 0.0);
    EffectiveParams p0 = params;
    p0.delta = d0;
    p0.omega12 = o0;
    const AdiabaticFrame f0 = eigensystem(p0);
    if (f0.at_ep)
      throw NumericalError("encircle: loop starts on a coalescence");
    Vec2 mix{f0.phi_plus[0] + f0.phi_minus[0],
             f0.phi_plus[1] + f0.phi_minus[1]};
    const double nrm = std::sqrt(std::norm(mix[0]) + std::norm(mix[1]));
    if (nrm == 0.0)
      throw NumericalError("encircle: mixed initial state vanished");
    c0 = Vec2{mix[0] / nrm, mix[1] / nrm};
  }

  const EncirclementResult res = run_encirclement(
      params, path, initial, c0, rel, abs_tol, samples, min_track);
  const Trajectory& traj = res.trajectory;

  std::vector<std::vector<std::string>> rows;
  rows.reserve(traj.times.size());
  json jrows = json::array();
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double tau = traj.times[i] / path.loop_time;
    const Vec2& c = traj.bare_amplitudes[i];
    const Vec2& a = traj.adiabatic_amplitudes[i];
    const double pp = std::norm(a[0]), pm = std::norm(a[1]);
    const double total = pp + pm;
    const double ppn = total > 0.0 ? pp / total
                                   : std::numeric_limits<double>::quiet_NaN();
    const double pmn = total > 0.0 ? pm / total
                                   : std::numeric_limits<double>::quiet_NaN();
    rows.push_back({format_double(tau), format_double(c[0].real()),
                    format_double(c[0].imag()), format_double(c[1].real()),
                    format_double(c[1].imag()), format_double(a[0].real()),
                    format_double(a[0].imag()), format_double(a[1].real()),
                    format_double(a[1].imag()), format_double(ppn),
                    format_double(pmn),
                    std::to_string(traj.branch_labels[i])});
    json jr;
    jr["tau"] = tau;
    jr["c1"] = complex_json(c[0]);
    jr["c2"] = complex_json(c[1]);
    jr["aplus"] = complex_json(a[0]);
    jr["aminus"] = complex_json(a[1]);
    jr["pop_plus_norm"] = ppn;
    jr["pop_minus_norm"] = pmn;
    jr["branch_label"] = traj.branch_labels[i];
    jrows.push_back(jr);
  }
  emit_table(config, files, "encircle_timeseries",
             "tau,re_c1,im_c1,re_c2,im_c2,re_aplus,im_aplus,re_aminus,"
             "im_aminus,pop_plus_norm,pop_minus_norm,branch_label",
             rows, jrows);

  json doc;
  doc["gamma1"] = g1;
  doc["gamma2"] = g2;
  doc["enantiomer"] = p.at("enantiomer");
  doc["direction"] = p.at("direction");
  doc["initial"] = ini;
  doc["loop_time"] = path.loop_time;
  doc["center_delta"] = path.center_delta;
  doc["center_omega"] = path.center_omega;
  doc["radius"] = path.radius;
  doc["samples"] = samples;
  doc["final_pop_plus_norm"] = res.final_pop_plus_norm;
  doc["final_pop_minus_norm"] = res.final_pop_minus_norm;
  doc["final_pop_plus_raw"] = res.final_pop_plus_raw;
  doc["final_pop_minus_raw"] = res.final_pop_minus_raw;
  doc["eigenvalue_swap"] = res.eigenvalue_swap;
  doc["dominant_final_state"] =
      res.dominant_final_state == AdiabaticLabel::Plus ? "plus" : "minus";
  doc["branch_cross_times"] = traj.branch_cross_times;
  emit_record(config, files, "encircle_summary.json", doc);
}

void run_loop_sweep(const RunConfig& config, ParamMap& p,
                    std::vector<std::string>& files) {
  const double g1 = num(p, "gamma1");
  const double g2 = num(p, "gamma2");
  const EffectiveParams params = make_params(g1, g2, 0.0, 0.0);

  EncirclementPath tmpl;
  tmpl.loop_time = 1.0;  // placeholder; the sweep substitutes each entry
  resolve_loop_geometry(p, g1, g2, tmpl);

  const InitialState initial = p.at("initial") == "minus"
                                   ? InitialState::MinusState
                                   : InitialState::PlusState;
  const std::vector<double> times = to_list("loop_times", p.at("loop_times"));

  const std::vector<LoopSweepRow> sweep =
      loop_time_sweep(params, tmpl, times, initial);

  std::vector<std::vector<std::string>> rows;
  rows.reserve(sweep.size());
  json jrows = json::array();
  for (const LoopSweepRow& r : sweep) {
    rows.push_back({format_double(r.loop_time), handedness_name(r.enantiomer),
                    direction_name(r.direction),
                    format_double(r.pop_plus_norm),
                    format_double(r.pop_minus_norm),
                    format_double(r.pop_plus_raw),
                    format_double(r.pop_minus_raw),
                    r.eigenvalue_swap ? "true" : "false",
                    r.dominant == AdiabaticLabel::Plus ? "plus" : "minus",
                    r.status});
    json jr;
    jr["loop_time"] = r.loop_time;
    jr["enantiomer"] = handedness_name(r.enantiomer);
    jr["direction"] = direction_name(r.direction);
    jr["pop_plus_norm"] = r.pop_plus_norm;
    jr["pop_minus_norm"] = r.pop_minus_norm;
    jr["pop_plus_raw"] = r.pop_plus_raw;
    jr["pop_minus_raw"] = r.pop_minus_raw;
    jr["eigenvalue_swap"] = r.eigenvalue_swap;
    jr["dominant"] = r.dominant == AdiabaticLabel::Plus ? "plus" : "minus";
    jr["status"] = r.status;
    jrows.push_back(jr);
  }
  emit_table(config, files, "loop_sweep",
             "loop_time,enantiomer,direction,pop_plus_norm,pop_minus_norm,"
             "pop_plus_raw,pop_minus_raw,eigenvalue_swap,dominant,status",
             rows, jrows);
}

MicroscopicParams canonical_micro(const ParamMap& p) {
  MicroscopicParams m;
  m.d1E = Vec3c{Complex(1, 0), Complex(0, 0), Complex(0, 0)};
  m.d2E = Vec3c{Complex(0, 0), Complex(1, 0), Complex(0, 0)};
  m.d12 = Vec3c{Complex(0, 0), Complex(0, 0), Complex(1, 0)};
  m.F1 = m.d1E;
  m.F2 = m.d2E;
  m.F3 = m.d12;
  m.omega2 = num(p, "omega2");
  m.omega3 = num(p, "omega3");
  m.omega1 = m.omega2 + m.omega3;
  m.E1 = num(p, "e1");
  m.E2 = num(p, "e2");
  return m;
}

void run_average(const RunConfig& config, ParamMap& p,
                 std::vector<std::string>& files) {
  const std::string& mode = p.at("mode");
  const std::int64_t samples = count_of(p, "samples");
  const int shards = static_cast<int>(count_of(p, "shards"));

  const auto record = [&](const MicroscopicParams& micro,
                          std::uint64_t mc_seed) {
    micro.validate();
    const PseudoscalarDecomposition d = decompose(micro);
    const McEstimate mc = mc_orientation_average(micro, samples, mc_seed, shards);
    json r;
    r["chi_m"] = complex_json(d.chi_m);
    r["h3"] = complex_json(d.h3);
    r["phi_m"] = d.phi_m;
    r["phi_l"] = d.phi_l;
    r["averaged_value"] = d.averaged_value;
    r["mc_estimate"] = mc.estimate;
    r["mc_std_error"] = mc.std_error;
    r["sigma_distance"] = mc.std_error > 0.0
                              ? std::abs(mc.estimate - d.averaged_value) /
                                    mc.std_error
                              : 0.0;
    return r;
  };

  json doc;
  doc["mode"] = mode;
  doc["samples"] = samples;
  doc["shards"] = shards;
  doc["seed"] = config.seed;
  if (mode == "canonical") {
    doc["record"] = record(canonical_micro(p), config.seed);
  } else if (mode == "custom") {
    for (const char* k : {"d1e", "d2e", "d12", "f1", "f2", "f3"})
      if (!has(p, k))
        throw ConfigError(std::string("average: custom mode needs '") + k +
                          "'");
    MicroscopicParams m;
    m.d1E = to_vec3c("d1e", p.at("d1e"));
    m.d2E = to_vec3c("d2e", p.at("d2e"));
    m.d12 = to_vec3c("d12", p.at("d12"));
    m.F1 = to_vec3c("f1", p.at("f1"));
    m.F2 = to_vec3c("f2", p.at("f2"));
    m.F3 = to_vec3c("f3", p.at("f3"));
    m.omega2 = num(p, "omega2");
    m.omega3 = num(p, "omega3");
    m.omega1 = m.omega2 + m.omega3;
    m.E1 = num(p, "e1");
    m.E2 = num(p, "e2");
    doc["record"] = record(m, config.seed);
  } else {  // random
    const long long draws = count_of(p, "draws");
    std::mt19937_64 rng(config.seed);
    const auto unif = [&] { return (rng() >> 11) * 0x1.0p-53; };
    const auto rvec = [&] {
      Vec3c v;
      for (auto& z : v)
        z = Complex(2.0 * unif() - 1.0, 2.0 * unif() - 1.0);
      return v;
    };
    json jdraws = json::array();
    double max_sigma = 0.0;
    for (long long j = 0; j < draws; ++j) {
      MicroscopicParams m;
      m.d1E = rvec();
      m.d2E = rvec();
      m.d12 = rvec();
      m.F1 = rvec();
      m.F2 = rvec();
      m.F3 = rvec();
      m.omega2 = 0.3 + 0.7 * unif();
      m.omega3 = 0.3 + 0.7 * unif();
      m.omega1 = m.omega2 + m.omega3;
      m.E1 = 2.0 * unif() - 1.0;
      m.E2 = 2.0 * unif() - 1.0;
      const json r = record(m, rng());
      max_sigma = std::max(max_sigma, r["sigma_distance"].get<double>());
      jdraws.push_back(r);
    }
    doc["draws"] = jdraws;
    doc["max_sigma_distance"] = max_sigma;
  }
  emit_record(config, files, "average.json", doc);
}

void run_scaling_probe(const RunConfig& config, ParamMap& p,
                       std::vector<std::string>& files) {
  const double g1 = num(p, "gamma1");
  const double g2 = num(p, "gamma2");
  const std::string& control = p.at("control");
  const std::array<double, 2> dir{num(p, "direction_delta"),
                                  num(p, "direction_omega")};
  const long long n = count_of(p, "eps_count");
  if (n < 2) throw ConfigError("eps_count: need at least 2");
  const double gsum = g1 + g2;
  const double la = std::log10(num(p, "eps_min_scale") * gsum);
  const double lb = std::log10(num(p, "eps_max_scale") * gsum);
  std::vector<double> epsilons(n);
  for (long long i = 0; i < n; ++i)
    epsilons[i] = std::pow(10.0, la + (lb - la) * static_cast<double>(i) /
                                          static_cast<double>(n - 1));

  json doc;
  doc["control"] = control;
  doc["gamma1"] = g1;
  doc["gamma2"] = g2;
  doc["direction"] = json::array({dir[0], dir[1]});
  doc["epsilons"] = epsilons;
  double exponent = 0.0;
  if (control == "ep") {
    const EPPoint cf = closed_form_eps(g1, g2, Handedness::Right)[0];
    const EPPoint ep = refine_ep(cf, g1, g2, Handedness::Right);
    exponent = response_scaling_probe(ep, g1, g2, dir, epsilons);
    doc["point"] = {{"delta", ep.delta}, {"omega12", ep.omega12}};
  } else {
    // Hermitian control: zero widths leave a linear crossing at the origin.
    const EPPoint dp{0.0, 0.0, Handedness::Right, 0.0, 0};
    exponent = response_scaling_probe(dp, 0.0, 0.0, dir, epsilons);
    doc["point"] = {{"delta", 0.0}, {"omega12", 0.0}};
  }
  doc["exponent"] = exponent;
  emit_record(config, files, "scaling.json", doc);
}

}  // namespace

std::map<std::string, std::string> resolve_parameters(const RunConfig& config) {
  validate_required(config);
  ParamMap p = config.parameters;
  const auto def = [&](const char* k, const char* v) { p.emplace(k, v); };
  switch (config.experiment) {
    case Experiment::EpLocate:
    case Experiment::RatioSweep:
      break;
    case Experiment::EigengapMap:
      def("delta_count", "101");
      def("omega_count", "101");
      break;
    case Experiment::Encircle:
      def("enantiomer", "right");
      def("direction", "as-written");
      def("loop_time", "4.78e5");
      def("samples", "2048");
      def("rel_tol", "1e-10");
      def("abs_tol", "1e-12");
      def("initial", "plus");
      def("min_track_samples", "4096");
      break;
    case Experiment::LoopSweep:
      def("initial", "plus");
      break;
    case Experiment::Average:
      def("mode", "canonical");
      def("samples", "100000");
      def("draws", "100");
      def("shards", "1");
      def("omega2", "0.6");
      def("omega3", "0.4");
      def("e1", "0");
      def("e2", "0.4");
      break;
    case Experiment::ScalingProbe:
      def("gamma1", "4");
      def("gamma2", "1");
      def("control", "ep");
      def("direction_delta", "0.6");
      def("direction_omega", "0.8");
      def("eps_min_scale", "1e-6");
      def("eps_max_scale", "1e-4");
      def("eps_count", "13");
      break;
  }
  for (const auto& [key, value] : p) {
    const auto& table = typed_keys(config.experiment);
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const TypedKey& t) { return key == t.key; });
    if (it == table.end()) continue;  // registry already screened membership
    switch (it->kind) {
      case 'n': to_double(key, value); break;
      case 'i': to_count(key, value); break;
      case 'l': to_list(key, value); break;
      case 'v': to_vec3c(key, value); break;
      case 'e':
        if (std::find_if(it->allowed.begin(), it->allowed.end(),
                         [&](const char* a) { return value == a; }) ==
            it->allowed.end()) {
          std::string opts;
          for (const char* a : it->allowed) {
            if (!opts.empty()) opts += ", ";
            opts += a;
          }
          throw ConfigError("key '" + key + "': expected one of " + opts +
                            ", got '" + value + "'");
        }
        break;
    }
  }
  return p;
}

int dispatch(const RunConfig& config) {
  ParamMap resolved = config.parameters;
  std::vector<std::string> files;
  std::string status = "ok";
  std::string error;
  int code = 0;
  try {
    // Create the output directory before resolving, so a config error still
    // leaves its manifest behind.
    if (!config.output_dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(config.output_dir, ec);
      if (ec)
        throw ConfigError("cannot create output directory '" +
                          config.output_dir + "': " + ec.message());
    }
    resolved = resolve_parameters(config);
    switch (config.experiment) {
      case Experiment::EpLocate: run_ep_locate(config, resolved, files); break;
      case Experiment::RatioSweep:
        run_ratio_sweep(config, resolved, files);
        break;
      case Experiment::EigengapMap: run_map(config, resolved, files); break;
      case Experiment::Encircle: run_encircle(config, resolved, files); break;
      case Experiment::LoopSweep: run_loop_sweep(config, resolved, files); break;
      case Experiment::Average: run_average(config, resolved, files); break;
      case Experiment::ScalingProbe:
        run_scaling_probe(config, resolved, files);
        break;
    }
  } catch (const ConfigError& e) {
    status = "config-error";
    error = e.what();
    code = 2;
  } catch (const std::invalid_argument& e) {
    status = "config-error";
    error = e.what();
    code = 2;
  } catch (const std::exception& e) {
    status = "numerical-error";
    error = e.what();
    code = 3;
  }

  try {
    json m;
    m["experiment"] = experiment_name(config.experiment);
    m["format"] = format_name(config.output_format);
    m["output_dir"] = config.output_dir;
    m["seed"] = config.seed;
    m["parameters"] = resolved;
    m["status"] = status;
    if (!error.empty()) m["error"] = error;
    m["files"] = files;
    m["tool_version"] = kVersion;
    write_text(file_in(config, "manifest.json"), m.dump(2) + "\n");
  } catch (const std::exception&) {
    if (code == 0) code = 3;
  }
  return code;
}

}  // namespace epchiral
