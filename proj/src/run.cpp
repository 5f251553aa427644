#include "etwist/run.hpp"

#include "etwist/beams.hpp"
#include "etwist/oam.hpp"
#include "etwist/scattering.hpp"
#include "etwist/transverse.hpp"
#include "etwist/units.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#ifndef ETWIST_VERSION
#define ETWIST_VERSION "dev"
#endif

namespace etwist {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

const char* spin_name(Spin s) { return s == Spin::up ? "up" : "down"; }

std::vector<ResultTable> figure1_tables(const RunConfig& cfg) {
  const auto& p = cfg.figure1;
  struct Named {
    const char* name;
    CollimatorGeometry geom;
  };
  const Named profiles[] = {
      {"two_pinholes",
       CollimatorGeometry::two_pinholes(p.pinhole_radius, p.pinhole_separation, p.k_z)},
      {"exit_and_pinhole", CollimatorGeometry::exit_and_pinhole(p.exit_radius, p.exit_pinhole_radius,
                                                                p.exit_separation, p.k_z)},
      {"annulus_and_pinhole",
       CollimatorGeometry::annulus_and_pinhole(p.annulus_inner, p.annulus_outer,
                                               p.annulus_pinhole_radius, p.annulus_separation,
                                               p.k_z)},
  };
  // spin-up incidence converts into (down, l = +1); spin-down into (up, l = -1)
  const bool up = p.spin == Spin::up;
  const std::string conv = up ? "A1_minus" : "Am1_plus";
  const std::string keep = up ? "A0_plus" : "A0_minus";

  std::vector<ResultTable> out;
  for (const auto& [name, geom] : profiles) {
    const auto profile = divergence_profile(geom, p.panels, p.order);
    const auto curves = oam_vs_depth(profile, p.C, p.k_z, p.z, p.spin);
    ResultTable t;
    t.name = std::string("figure1_") + name;
    t.columns = {{"z", "m"}, {conv, "1"}, {keep, "1"}, {"total", "1"}};
    for (std::size_t i = 0; i < curves.z.size(); ++i)
      t.add_row({curves.z[i], curves.converted[i], curves.unconverted[i], curves.total[i]});
    const std::size_t q = curves.z.size() / 4;
    t.metadata = {{"profile", name},
                  {"k_z [1/m]", fmt(p.k_z)},
                  {"C [1/m]", fmt(p.C)},
                  {"incident_spin", spin_name(p.spin)},
                  {"radial_nodes", std::to_string(profile.grid.size())},
                  {"mean_k_r [1/m]", fmt(profile.mean_k())},
                  {"variance_k_r [1/m^2]", fmt(profile.variance_k())},
                  {"late_contrast", fmt(envelope_contrast(std::span(curves.converted).subspan(
                                        curves.z.size() - std::max<std::size_t>(q, 1))))}};
    out.push_back(std::move(t));

    if (p.mc_rays > 0) {
      std::vector<double> k(static_cast<std::size_t>(p.mc_points));
      for (std::size_t i = 0; i < k.size(); ++i)
        k[i] = geom.k_max() * static_cast<double>(i + 1) / static_cast<double>(k.size());
      const auto mc = monte_carlo_cdf(geom, k, p.mc_rays, *cfg.seed);
      ResultTable m;
      m.name = std::string("figure1_mc_") + name;
      m.columns = {{"k_r", "1/m"}, {"cdf_analytic", "1"}, {"cdf_monte_carlo", "1"}};
      double sup = 0.0;
      for (std::size_t i = 0; i < k.size(); ++i) {
        const double a = profile.cdf(k[i]);
        sup = std::max(sup, std::abs(a - mc[i]));
        m.add_row({k[i], a, mc[i]});
      }
      m.metadata = {{"rays", std::to_string(p.mc_rays)}, {"sup_norm", fmt(sup)}};
      out.push_back(std::move(m));
    }
  }
  return out;
}

std::vector<ResultTable> figure2_tables(const RunConfig& cfg) {
  const auto& p = cfg.figure2;
  const auto scan = reflection_scan(cfg.physics, p.theta, p.lambda, p.E, p.spin);
  ResultTable t;
  t.name = "figure2_reflection";
  t.columns = {{"theta", "deg"}, {"theta", "rad"}, {"P_flip", "1"}, {"P_nonflip", "1"}};
  for (std::size_t i = 0; i < scan.theta.size(); ++i)
    t.add_row({rad_to_deg(scan.theta[i]), scan.theta[i], scan.probabilities[i].spin_flip,
               scan.probabilities[i].non_flip});
  t.metadata = {{"lambda [m]", fmt(p.lambda)},
                {"E [V/m]", fmt(p.E)},
                {"incident_spin", spin_name(p.spin)},
                {"normalization", "reflected flux / incident flux"},
                {"peak_theta [deg]", fmt(rad_to_deg(scan.theta[scan.peak_index]))}};
  return {t};
}

std::vector<ResultTable> figure3_tables(const RunConfig& cfg) {
  const auto& p = cfg.figure3;
  Fig3Options opts;
  opts.model = p.exact ? TwistModel::exact : TwistModel::ideal;
  opts.rotation = p.rotation;
  const auto s = fig3_surfaces(p.sigma_y, p.R, p.k_y_mean, opts);
  ResultTable t;
  t.name = "figure3_surfaces";
  t.layout = "grid";
  t.columns = {{"sigma_y", "1/m"}, {"R", "1"}, {"A1", "1"}, {"ln_sigma_ell", "1"}, {"sigma_ell", "1"}};
  for (std::size_t i = 0; i < s.sigma_y.size(); ++i)
    for (std::size_t j = 0; j < s.R.size(); ++j)
      t.add_row({s.sigma_y[i], s.R[j], s.a1(i, j), std::log(s.bandwidth(i, j)), s.bandwidth(i, j)});
  t.metadata = {{"k_y_mean [1/m]", fmt(p.k_y_mean)},
                {"twist_model", p.exact ? "exact" : "ideal"},
                {"log", "natural"}};
  if (p.exact) t.metadata.push_back({"rotation [rad]", fmt(p.rotation)});
  return {t};
}

std::vector<ResultTable> figure4_tables(const RunConfig& cfg) {
  const auto& p = cfg.figure4;
  GaussianPacketSpec spec{p.k_y_mean, std::sqrt(p.sigma_y2), p.R};
  const auto kgrid = gaussian_k_grid(spec, p.k_points);
  const auto packet = gaussian_packet(spec, kgrid, p.spin);
  const auto target = CartesianGrid::centered(0.0, p.half_width, p.points, 0.0, p.half_width, p.points);
  std::vector<ResultTable> out;
  for (bool raised : {false, true}) {
    const auto field = synthesize_real_space(packet, target, raised);
    const auto& psi = p.spin == Spin::up ? field.up : field.down;
    const auto c = field_centroid(field);
    ResultTable t;
    t.name = raised ? "figure4_raised" : "figure4_unraised";
    t.layout = "grid";
    t.columns = {{"x", "m"}, {"y", "m"}, {"re_psi", "arb"}, {"im_psi", "arb"}, {"abs_psi", "arb"}};
    for (int j = 0; j < target.ny; ++j)
      for (int i = 0; i < target.nx; ++i) {
        const auto v = psi[static_cast<std::size_t>(j) * target.nx + i];
        t.add_row({target.x(i), target.y(j), v.real(), v.imag(), std::abs(v)});
      }
    t.metadata = {{"k_y_mean [1/m]", fmt(p.k_y_mean)},
                  {"sigma_y^2 [1/m^2]", fmt(p.sigma_y2)},
                  {"R", fmt(p.R)},
                  {"component", spin_name(p.spin)},
                  {"centroid_x [m]", fmt(c.x)},
                  {"centroid_y [m]", fmt(c.y)}};
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<ResultTable> voltage_tables(const RunConfig& cfg) {
  ResultTable t;
  t.name = "voltage";
  t.columns = {{"alpha", "deg"}, {"alpha", "rad"}, {"V", "V"}};
  for (double a : cfg.voltage.alpha)
    t.add_row({rad_to_deg(a), a, full_twist_voltage(cfg.physics, a)});
  t.metadata = {{"gyromagnetic_ratio [rad/(s T)]", fmt(cfg.physics.gyromagnetic_ratio)},
                {"speed_of_light [m/s]", fmt(cfg.physics.speed_of_light)}};
  return {t};
}

std::vector<ResultTable> design_tables(const RunConfig& cfg) {
  ResultTable t;
  t.name = "design";
  t.columns = {{"E", "V/m"}, {"L", "m"}, {"C", "1/m"}, {"amplitude", "1"}};
  for (const auto& pt : design_plan(cfg.design))
    t.add_row({pt.E, pt.L, coupling_constant(cfg.physics, pt.E).value,
               twister_amplitude(cfg.physics, pt.E, pt.L)});
  t.metadata = {{"amplitude", "|sin(C L / 2)|"}};
  return {t};
}

Provenance provenance_of(const RunConfig& cfg) {
  return {std::string(command_name(cfg.command)), cfg.hash(), ETWIST_VERSION, cfg.seed};
}

std::string summary_line(const std::filesystem::path& rel, const ResultTable& t) {
  std::string s = rel.string() + ": " + std::to_string(t.rows()) + " rows";
  for (const auto& [k, v] : t.metadata)
    if (k.starts_with("peak") || k.starts_with("late") || k.starts_with("sup") ||
        k.starts_with("centroid"))
      s += ", " + k + " = " + v;
  if (t.name == "voltage" || t.name == "design")
    for (std::size_t r = 0; r < t.rows(); ++r) {
      s += "\n  ";
      for (std::size_t c = 0; c < t.columns.size(); ++c)
        s += (c ? ", " : "") + t.columns[c].name + " = " + fmt(t.at(r, c)) + " " +
             t.columns[c].unit;
    }
  return s;
}

nlohmann::json config_json(const RunConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : cfg.effective) j[k] = v;
  return j;
}

} // namespace

std::vector<ResultTable> compute_tables(const RunConfig& config) {
  switch (config.command) {
  case Command::figure1: return figure1_tables(config);
  case Command::figure2: return figure2_tables(config);
  case Command::figure3: return figure3_tables(config);
  case Command::figure4: return figure4_tables(config);
  case Command::voltage: return voltage_tables(config);
  case Command::design: return design_tables(config);
  case Command::sweep: break;
  }
  throw Error("compute_tables: sweeps are expanded by run()");
}

RunReport run(const RunConfig& config, const std::filesystem::path& out_dir) {
  RunReport report;
  OutputTransaction tx(out_dir);
  std::vector<std::string> csv_files;
  nlohmann::json outputs = nlohmann::json::array();

  const auto emit = [&](const std::filesystem::path& rel, const ResultTable& t,
                        const Provenance& prov) {
    const auto text = format_csv(t, prov);
    tx.stage(rel, text);
    csv_files.push_back(rel.generic_string());
    outputs.push_back({{"file", rel.generic_string()},
                       {"rows", t.rows()},
                       {"fnv1a64", hex64(fnv1a64(text))}});
    report.summary.push_back(summary_line(rel, t));
  };

  nlohmann::json sidecar;
  if (config.command != Command::sweep) {
    const auto prov = provenance_of(config);
    for (const auto& t : compute_tables(config))
      emit(std::filesystem::path(t.name + ".csv"), t, prov);
  } else {
    const auto plan = expand_sweep(config);
    std::vector<std::vector<ResultTable>> results(plan.size());
    std::vector<std::exception_ptr> errors(plan.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned threads = std::min<unsigned>(
        config.sweep.threads > 0 ? static_cast<unsigned>(config.sweep.threads) : hw,
        static_cast<unsigned>(plan.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < plan.size(); i += threads) {
          try {
            results[i] = compute_tables(plan[i].config);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);

    ResultTable planned;
    planned.name = "sweep_plan";
    for (std::size_t a = 0; a < config.sweep.axes.size(); ++a)
      planned.columns.push_back({config.sweep.axes[a], key_unit(config.sweep.axes[a])});
    planned.columns.insert(planned.columns.begin(), Column{"point", "1"});
    planned.metadata = {{"target", std::string(command_name(config.sweep.target))},
                        {"directories", "point_NNN, numbered by the point column"}};
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < plan.size(); ++i) {
      char dir[32];
      std::snprintf(dir, sizeof dir, "point_%03zu", i);
      std::vector<double> row{static_cast<double>(i)};
      for (const auto& a : config.sweep.axes) row.push_back(axis_value(a, plan[i].assignment.at(a)));
      planned.data.insert(planned.data.end(), row.begin(), row.end());
      const auto prov = provenance_of(plan[i].config);
      for (const auto& t : results[i]) emit(std::filesystem::path(dir) / (t.name + ".csv"), t, prov);
      points.push_back({{"directory", dir},
                        {"assignment", plan[i].assignment},
                        {"config_hash", plan[i].config.hash()}});
    }
    emit("sweep_plan.csv", planned, provenance_of(config));
    sidecar["points"] = points;
  }

  if (config.plot_script) {
    const auto name = "plot_" + std::string(command_name(config.command)) + ".py";
    tx.stage(name, plot_script(csv_files));
    outputs.push_back({{"file", name}});
  }

  sidecar["tool"] = "etwist";
  sidecar["version"] = ETWIST_VERSION;
  sidecar["command"] = command_name(config.command);
  sidecar["config_hash"] = "fnv1a64:" + config.hash();
  sidecar["seed"] = config.seed ? nlohmann::json(*config.seed) : nlohmann::json(nullptr);
  sidecar["timestamp"] = utc_timestamp();
  sidecar["config"] = config_json(config);
  sidecar["outputs"] = outputs;
  tx.stage("provenance.json", sidecar.dump(2) + "\n");
  tx.commit();
  report.files = tx.files();
  return report;
}

std::string plot_script(const std::vector<std::string>& files) {
  std::string list;
  for (const auto& f : files) list += "    \"" + f + "\",\n";
  return R"(#!/usr/bin/env python3
# Generic plots of etwist CSV tables; reads the '# layout:' line of each file.
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
FILES = [
)" + list + R"(]


def load(path):
    layout, header, rows = "curve", None, []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                if line.startswith("# layout:"):
                    layout = line.split(":", 1)[1].strip()
                continue
            if header is None:
                header = next(csv.reader([line]))
            else:
                rows.append([float(v) for v in line.strip().split(",")])
    return layout, header, list(zip(*rows))


def main():
    for name in FILES:
        layout, header, cols = load(os.path.join(HERE, name))
        if layout == "grid":
            n = len(header) - 2
            fig, axes = plt.subplots(1, n, figsize=(4.5 * n, 4), squeeze=False)
            for k in range(n):
                ax = axes[0][k]
                tc = ax.tricontourf(cols[0], cols[1], cols[k + 2], levels=40)
                fig.colorbar(tc, ax=ax)
                ax.set_xlabel(header[0])
                ax.set_ylabel(header[1])
                ax.set_title(header[k + 2])
        else:
            fig, ax = plt.subplots(figsize=(6, 4))
            for k in range(1, len(header)):
                ax.plot(cols[0], cols[k], label=header[k])
            ax.set_xlabel(header[0])
            ax.legend()
        fig.tight_layout()
        out = os.path.join(HERE, os.path.splitext(name)[0] + ".png")
        fig.savefig(out, dpi=120)
        plt.close(fig)
        print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
)";
}

} // namespace etwist
