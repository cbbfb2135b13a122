// Command-line driver: material catalog -> potential tables -> reflection,
// badlands and lifetime outputs.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "badlands/casimir_polder.hpp"
#include "badlands/errors.hpp"
#include "badlands/gravity.hpp"
#include "badlands/liouville.hpp"
#include "badlands/material_config.hpp"
#include "badlands/reflection.hpp"
#include "badlands/units.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace badlands;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::vector<std::string> materials;
  std::optional<double> porosity;
  std::optional<std::string> heights;
  std::string zrange = "0.01:1e5";
  int points = 281;
  double g_bar = units::standard_gravity;
  std::string out = "out";
  std::optional<double> window_tol;
  double table_tol = 1e-6;
  std::optional<std::string> config;
  unsigned threads = 0;
  bool timestamp = true;
  bool check = false;
};

const std::vector<std::string> kTableSurfaces{"perfect", "silicon", "silica", "aerogel50", "aerogel90", "aerogel98"};

std::vector<double> parse_heights(const std::string& spec) {
  if (spec.empty()) throw UsageError("--heights: empty height list; expected start:stop:log|lin:count");
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 4 || (parts[2] != "log" && parts[2] != "lin"))
    throw UsageError("--heights '" + spec + "': expected start:stop:log|lin:count, e.g. 1e-9:1e3:log:25");
  double start, stop;
  long count;
  try {
    start = std::stod(parts[0]);
    stop = std::stod(parts[1]);
    count = std::stol(parts[3]);
  } catch (const std::exception&) {
    throw UsageError("--heights '" + spec + "': start, stop and count must be numbers");
  }
  if (!(start > 0) || !(stop > 0)) throw UsageError("--heights '" + spec + "': heights must be strictly positive");
  if (count < 1) throw UsageError("--heights '" + spec + "': count must be >= 1");
  if (count > 1 && !(stop > start)) throw UsageError("--heights '" + spec + "': stop must exceed start");
  std::vector<double> h(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    h[static_cast<std::size_t>(i)] =
        parts[2] == "log" ? std::pow(10.0, std::log10(start) + t * std::log10(stop / start))
                          : start + (stop - start) * t;
  }
  if (count > 1) h.back() = stop;
  return h;
}

std::pair<double, double> parse_range(const std::string& spec) {
  const auto colon = spec.find(':');
  double a = 0, b = 0;
  try {
    if (colon == std::string::npos) throw std::invalid_argument("no colon");
    a = std::stod(spec.substr(0, colon));
    b = std::stod(spec.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("--zrange '" + spec + "': expected z_min:z_max in nm, e.g. 0.01:1e5");
  }
  if (!(a > 0) || !(b > a)) throw UsageError("--zrange '" + spec + "': need 0 < z_min < z_max");
  return {a, b};
}

std::string timestamp_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string porosity_tag(double f) {
  std::ostringstream s;
  s << f;
  return s.str();
}

class Driver {
 public:
  explicit Driver(RunConfig cfg) : cfg_(std::move(cfg)) {
    const std::optional<fs::path> explicit_file = cfg_.config ? std::optional<fs::path>(*cfg_.config) : std::nullopt;
    catalog_ = load_catalog(locate_catalog(explicit_file));
    for (const auto& name : cfg_.materials)
      if (!catalog_.contains(name))
        throw ConfigError("unknown material '" + name + "' (catalog " + catalog_.source + "; run 'badlands materials')");
    if (cfg_.porosity && !(*cfg_.porosity >= 0 && *cfg_.porosity <= 1))
      throw UsageError("--porosity must lie in [0,1]");
    if (cfg_.points < 50) throw UsageError("--points must be >= 50");
    if (!(cfg_.g_bar > 0)) throw UsageError("--gbar must be > 0");
    if (cfg_.window_tol && !(*cfg_.window_tol > 0)) throw UsageError("--tol must be > 0");
    if (!(cfg_.table_tol > 0)) throw UsageError("--table-tol must be > 0");
  }

  int run() {
    if (cfg_.check) return check();
    if (cfg_.command == "materials") return materials();
    fs::create_directories(cfg_.out);
    if (cfg_.command == "potential") return potential();
    if (cfg_.command == "reflectivity") return reflectivity();
    if (cfg_.command == "badlands") return badlands_cmd();
    if (cfg_.command == "lifetimes") return lifetimes();
    throw UsageError("no command given; use one of potential, reflectivity, badlands, lifetimes, materials or --check");
  }

 private:
  RunConfig cfg_;
  MaterialCatalog catalog_;

  // Selected materials with the porosity override applied; the override is
  // reflected in the name so outputs never collide with the bulk ones.
  std::vector<MaterialModel> selection(const std::vector<std::string>& fallback) const {
    const auto& names = cfg_.materials.empty() ? fallback : cfg_.materials;
    std::vector<MaterialModel> out;
    for (const auto& n : names) {
      MaterialModel m = catalog_.find(n);
      if (cfg_.porosity) {
        m.porosity = *cfg_.porosity;
        m.validate();
        m.name += "-p" + porosity_tag(*cfg_.porosity);
      }
      out.push_back(std::move(m));
    }
    return out;
  }

  ScatteringTolerances tolerances() const {
    ScatteringTolerances t;
    if (cfg_.window_tol) t.window = *cfg_.window_tol;
    return t;
  }

  std::shared_ptr<const PotentialTable> table(const MaterialModel& m) const {
    const auto [z0, z1] = parse_range(cfg_.zrange);
    TableSpec spec;
    spec.z_min = z0;
    spec.z_max = z1;
    spec.points = cfg_.points;
    spec.rel_tol = cfg_.table_tol;
    spec.threads = cfg_.threads;
    auto t = std::make_shared<PotentialTable>(build_potential_table(m, catalog_.atom, spec));
    return t;
  }

  fs::path path(const std::string& file) const { return fs::path(cfg_.out) / file; }

  void write_csv(const std::string& file, const std::string& body) const {
    std::ofstream out(path(file));
    if (!out) throw std::runtime_error("cannot write " + path(file).string());
    if (cfg_.timestamp) out << "# generated " << timestamp_now() << "\n";
    out << body;
    if (!out) throw std::runtime_error("write failed: " + path(file).string());
  }

  void write_json(const std::string& file, json j) const {
    if (cfg_.timestamp) j["generated"] = timestamp_now();
    std::ofstream out(path(file));
    if (!out) throw std::runtime_error("cannot write " + path(file).string());
    out << j.dump(2) << "\n";
  }

  int materials() const {
    std::cout << "catalog: " << catalog_.source << "\n";
    for (const auto& m : catalog_.materials) {
      std::cout << "  " << m.name << (m.perfect() ? "  perfect mirror" : "  oscillator model");
      if (m.porosity > 0) std::cout << ", porosity " << m.porosity;
      std::cout << "\n";
    }
    return 0;
  }

  int potential() const {
    for (const auto& m : selection({"perfect"})) {
      const auto t = table(m);
      std::ostringstream csv;
      write_potential_csv(csv, *t);
      write_csv("potential_" + m.name + ".csv", csv.str());
      json j;
      j["material"] = m.name;
      j["porosity"] = m.porosity;
      j["z_min_nm"] = t->z_low();
      j["z_max_nm"] = t->z_high();
      j["points"] = t->z_grid().size();
      j["rel_tol"] = t->tolerance();
      j["c3_neV_nm3"] = t->c3();
      j["c4_neV_nm4"] = t->c4();
      j["c4_star_neV_nm4"] = t->c4_star();
      j["c3_fit_residual"] = t->c3_residual();
      j["c4_fit_residual"] = t->c4_residual();
      j["c3_exact_neV_nm3"] = van_der_waals_c3(m, catalog_.atom);
      j["ratio_to_ideal_at_z_max"] = ratio_to_ideal(*t, t->z_high());
      j["c4_over_c4_star"] = t->c4() / t->c4_star();
      j["cp_length_nm"] = cp_length(t->c4(), units::hydrogen_mc2);
      write_json("potential_" + m.name + ".json", j);
      std::printf("%-16s c3 = %.6e neV nm^3  c4 = %.6e neV nm^4  c4/c4* = %.5f\n", m.name.c_str(), t->c3(), t->c4(),
                  t->c4() / t->c4_star());
    }
    return 0;
  }

  int reflectivity() const {
    const auto heights = parse_heights(cfg_.heights.value_or("1e-9:1e3:log:25"));
    json summary;
    summary["heights_m"] = heights;
    summary["materials"] = json::array();
    for (const auto& m : selection({"perfect", "silicon", "silica"})) {
      const auto t = table(m);
      const auto curve = reflection_curve(t, heights, tolerances(), cfg_.threads);
      std::ostringstream csv;
      write_reflection_csv(csv, curve);
      write_csv("reflectivity_" + m.name + ".csv", csv.str());
      const auto golden = integrate_amplitudes(ScatteringProblem::at_height(t, 0.10, tolerances()));
      bool monotone = true;
      double deficit = 0;
      for (std::size_t i = 0; i < curve.size(); ++i) {
        deficit = std::max(deficit, std::abs(curve[i].result.flux_deficit));
        if (i > 0 && heights[i] > heights[i - 1] && !(curve[i].result.probability < curve[i - 1].result.probability))
          monotone = false;
      }
      json e;
      e["material"] = m.name;
      e["prob_reflect_at_0.10m"] = golden.probability;
      e["r_at_0.10m"] = {golden.r.real(), golden.r.imag()};
      e["monotone_decreasing"] = monotone;
      e["max_abs_flux_deficit"] = deficit;
      summary["materials"].push_back(e);
      std::printf("%-16s |r|^2(0.10 m) = %.6f  monotone = %s  max flux deficit = %.2e\n", m.name.c_str(),
                  golden.probability, monotone ? "yes" : "no", deficit);
    }
    write_json("reflectivity_summary.json", summary);
    return 0;
  }

  int badlands_cmd() const {
    const auto heights = parse_heights(cfg_.heights.value_or("0.001:0.1:log:3"));
    json summary = json::array();
    for (const auto& m : selection({"silica"})) {
      const auto t = table(m);
      for (double h : heights) {
        const auto lp = liouville_transform(ScatteringProblem::at_height(t, h, tolerances()));
        std::ostringstream csv;
        write_badlands_csv(csv, lp);
        std::ostringstream name;
        name << "badlands_" << m.name << "_h" << h << ".csv";
        write_csv(name.str(), csv.str());
        json e;
        e["material"] = m.name;
        e["height_m"] = h;
        e["energy_neV"] = lp.source.energy();
        e["max_Q"] = lp.peak.barrier;
        e["z_at_max_nm"] = lp.peak.z;
        e["zbold_at_max"] = lp.peak.zbold;
        e["z_left_nm"] = lp.z_left;
        e["z_right_nm"] = lp.z_right;
        e["file"] = name.str();
        summary.push_back(e);
        std::printf("%-16s h = %-8g max Q = %.6f at z = %.4g nm\n", m.name.c_str(), h, lp.peak.barrier, lp.peak.z);
      }
    }
    write_json("badlands_summary.json", json{{"peaks", summary}});
    return 0;
  }

  std::vector<LifetimeRow> lifetime_rows(const std::vector<MaterialModel>& mats, json* details) const {
    GravityConfig g;
    g.g_bar = cfg_.g_bar;
    std::vector<LifetimeRow> rows;
    for (const auto& m : mats) {
      ScatteringLengthOptions opt;
      opt.tol = tolerances();
      opt.threads = cfg_.threads;
      const auto sl = scattering_length(table(m), opt);
      rows.push_back({m.name, m.porosity, sl.a, gbs_lifetime(sl.a, g)});
      if (details) {
        json e;
        e["material"] = m.name;
        e["porosity"] = m.porosity;
        e["a_nm"] = {sl.a.real(), sl.a.imag()};
        e["extrapolation_residual"] = sl.residual;
        e["lifetime_s"] = rows.back().lifetime;
        e["gbs_energies_peV"] = json::array();
        for (const auto& s : bound_states(g, sl.a, 3))
          e["gbs_energies_peV"].push_back({s.energy_shifted.real(), s.energy_shifted.imag()});
        details->push_back(e);
      }
    }
    return rows;
  }

  int lifetimes() const {
    json details = json::array();
    const auto rows = lifetime_rows(selection(kTableSurfaces), &details);
    std::ostringstream csv, text;
    write_lifetimes_csv(csv, rows);
    write_lifetimes_table(text, rows);
    write_csv("lifetimes.csv", csv.str());
    {
      std::ofstream out(path("lifetimes.txt"));
      out << text.str();
    }
    write_json("lifetimes.json", json{{"g_bar_m_s2", cfg_.g_bar}, {"surfaces", details}});
    std::cout << text.str();
    return 0;
  }

  // Golden values taken from the published results.
  int check() const {
    struct Item {
      std::string name;
      double value, expect, tol;  // |value - expect| <= tol
      bool pass;
    };
    std::vector<Item> items;
    auto add = [&](std::string name, double value, double expect, double tol) {
      const bool pass = std::abs(value - expect) <= tol;
      items.push_back({std::move(name), value, expect, tol, pass});
      std::printf("%s %-28s %.6g (expected %.6g +- %.3g)\n", pass ? "PASS" : "FAIL", items.back().name.c_str(), value,
                  expect, tol);
      std::fflush(stdout);
    };
    const GravityConfig g;
    add("mg_neV_per_m", weight_neV_per_m(), 102.5, 0.005 * 102.5);
    add("l_grav_um", g.length() / 1e3, 5.87, 0.01 * 5.87);
    const double c4 = ideal_reference(catalog_.atom).c4_star;
    add("c4_star_1e7_neV_nm4", c4 / 1e7, 1.57, 0.02 * 1.57);
    add("l_cp_nm", cp_length(c4, units::hydrogen_mc2), 28.5, 1.5);

    const std::vector<std::pair<std::string, double>> refl{{"perfect", 0.14}, {"silicon", 0.19}, {"silica", 0.33}};
    for (const auto& [name, expect] : refl) {
      const auto t = table(catalog_.find(name));
      if (name == "perfect") {
        add("slope_small_z_perfect", -t->log_slope(t->z_low()), 3.0, 0.05);
        add("slope_large_z_perfect", -t->log_slope(t->z_high()), 4.0, 0.05);
      }
      const auto r = integrate_amplitudes(ScatteringProblem::at_height(t, 0.10, tolerances()));
      add("prob_reflect_0.10m_" + name, r.probability, expect, 0.03);
    }

    const std::vector<double> reference{0.11, 0.14, 0.22, 0.32, 1.07, 4.64};
    std::vector<MaterialModel> mats;
    for (const auto& n : kTableSurfaces) mats.push_back(catalog_.find(n));
    const auto rows = lifetime_rows(mats, nullptr);
    bool ordered = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      add("lifetime_s_" + rows[i].material, rows[i].lifetime, reference[i], 0.2 * reference[i]);
      if (i > 0 && !(rows[i].lifetime > rows[i - 1].lifetime)) ordered = false;
    }
    add("lifetime_ordering", ordered ? 1.0 : 0.0, 1.0, 0.0);

    json report = json::array();
    int failed = 0;
    for (const auto& it : items) {
      report.push_back({{"item", it.name}, {"value", it.value}, {"expected", it.expect}, {"tolerance", it.tol},
                        {"pass", it.pass}});
      if (!it.pass) ++failed;
    }
    fs::create_directories(cfg_.out);
    write_json("check.json", json{{"items", report}, {"failed", failed}});
    std::printf("%d of %zu checks passed\n", static_cast<int>(items.size()) - failed, items.size());
    return failed == 0 ? 0 : 1;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum reflection of antihydrogen from Casimir-Polder potentials"};
  RunConfig cfg;
  app.add_option("--material", cfg.materials, "Material name from the catalog (repeatable)");
  app.add_option("--porosity", cfg.porosity, "Override the porosity of the selected materials");
  app.add_option("--heights", cfg.heights, "Drop heights in m as start:stop:log|lin:count");
  app.add_option("--zrange", cfg.zrange, "Potential table range in nm as z_min:z_max")->capture_default_str();
  app.add_option("--points", cfg.points, "Potential table points")->capture_default_str();
  app.add_option("--gbar", cfg.g_bar, "Gravitational acceleration for lifetimes, m/s^2")->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--tol", cfg.window_tol, "Window-convergence tolerance on |delta r|");
  app.add_option("--table-tol", cfg.table_tol, "Relative quadrature tolerance of the potential table")
      ->capture_default_str();
  app.add_option("--config", cfg.config, "Material catalog file (else $BADLANDS_MATERIALS and default locations)");
  app.add_option("--threads", cfg.threads, "Worker threads, 0 = all cores")->capture_default_str();
  bool no_timestamp = false;
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp line so outputs are byte-reproducible");
  app.add_flag("--check", cfg.check, "Run the golden-value suite and report pass/fail per item");

  for (const char* name : {"potential", "reflectivity", "badlands", "lifetimes", "materials"}) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();
    sub->callback([&cfg, name] { cfg.command = name; });
  }
  app.get_subcommand("potential")->description("Tabulate the Casimir-Polder potential (CSV + JSON sidecar)");
  app.get_subcommand("reflectivity")->description("Reflection probability against drop height");
  app.get_subcommand("badlands")->description("Badlands function Q(z) in the Liouville-transformed picture");
  app.get_subcommand("lifetimes")->description("Scattering lengths and gravitational-state lifetimes");
  app.get_subcommand("materials")->description("List the material catalog");
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  cfg.timestamp = !no_timestamp;

  try {
    if (cfg.command.empty() && !cfg.check) {
      std::cerr << app.help();
      return 2;
    }
    Driver driver(cfg);
    return driver.run();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "did not converge: " << e.what() << "\n";
    if (cfg.command == "potential")
      std::cerr << "  the table needs a z range spanning both the van der Waals and retarded regimes (--zrange)\n";
    else
      std::cerr << "  try a looser --tol or a narrower --heights range\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
