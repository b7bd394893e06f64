#include <charconv>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gaussclone/cloner.hpp"
#include "gaussclone/detection.hpp"
#include "gaussclone/errors.hpp"
#include "gaussclone/fidelity.hpp"
#include "gaussclone/parallel.hpp"
#include "gaussclone/serialization.hpp"
#include "gaussclone/state_spec.hpp"

namespace {

using gaussclone::BudgetError;
using gaussclone::ParseError;
using gaussclone::RangeError;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_num(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string fmt_label(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", value);
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string hash_hex(const std::string& text) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

double parse_real(const std::string& token, const std::string& what) {
  std::string body = token;
  if (!body.empty() && body[0] == '+') body.erase(0, 1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr != body.data() + body.size())
    throw ParseError(what + ": '" + token + "' is not a number");
  return value;
}

std::vector<double> make_grid(double lo, double hi, double step, const char* what) {
  if (!(step > 0.0)) throw RangeError(std::string(what) + ": step must be positive");
  if (!(hi >= lo)) throw RangeError(std::string(what) + ": max must be >= min");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double value = lo + i * step;
    if (value > hi + 1e-9 * std::max(1.0, std::abs(hi))) break;
    grid.push_back(value);
  }
  return grid;
}

// Assembled in memory and written in one shot so failures never leave a
// partial data file behind.
void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw IoError("failed while writing '" + path + "'");
}

std::string render_table(const std::string& config_key,
                         const std::vector<std::string>& columns,
                         const std::vector<std::vector<double>>& rows,
                         const std::string& format) {
  if (format == "csv") {
    std::string text = "# gaussclone v1; config-hash=" + hash_hex(config_key) + "\n";
    for (std::size_t c = 0; c < columns.size(); ++c)
      text += (c ? "," : "") + columns[c];
    text += "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c)
        text += (c ? "," : "") + fmt_num(row[c]);
      text += "\n";
    }
    return text;
  }
  nlohmann::json doc;
  doc["header"] = {{"tool", "gaussclone"}, {"version", 1},
                   {"config_hash", hash_hex(config_key)}};
  doc["columns"] = columns;
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::string join_labels(const std::vector<double>& values) {
  std::string text;
  for (std::size_t i = 0; i < values.size(); ++i)
    text += (i ? "," : "") + fmt_label(values[i]);
  return text;
}

gaussclone::EstimateMethod parse_method(const std::string& name) {
  if (name == "quad") return gaussclone::EstimateMethod::quadrature;
  if (name == "mc") return gaussclone::EstimateMethod::monte_carlo;
  throw ParseError("--method must be 'quad' or 'mc'");
}

int run_fig2(const std::vector<double>& grid, double eta, const std::string& out,
             const std::string& format) {
  const std::string key = "fig2;r=" + join_labels(grid) + ";eta=" + fmt_label(eta) +
                          ";format=" + format;
  std::vector<std::vector<double>> rows(grid.size());
  gaussclone::parallel_for(grid.size(), gaussclone::default_thread_count(),
                           [&](std::size_t i) {
    const Eigen::Matrix2d sigma_k =
        gaussclone::squeezed_coherent(0.0, grid[i]).cov();
    const Eigen::Matrix2d sigma_m =
        gaussclone::GaussianMeasurement::heterodyne(eta).cov();
    const double s_bar = gaussclone::optimal_ancilla_squeezing(sigma_k, sigma_m);
    const double f_opt = gaussclone::symmetric_cloning_fidelity(
        sigma_k, gaussclone::squeezed_thermal(0.0, s_bar).cov(), sigma_m);
    const double f_vac = gaussclone::symmetric_cloning_fidelity(
        sigma_k, gaussclone::vacuum().cov(), sigma_m);
    rows[i] = {grid[i], f_opt, f_vac};
  });
  write_output(out, render_table(key, {"r", "f_opt_ancilla", "f_vacuum_ancilla"}, rows,
                                 format));
  return 0;
}

int run_fig3(const std::vector<double>& grid, const std::vector<double>& etas,
             const std::string& out, const std::string& format) {
  const std::string key =
      "fig3;r=" + join_labels(grid) + ";eta=" + join_labels(etas) + ";format=" + format;
  std::vector<std::string> columns{"r"};
  for (const double eta : etas) columns.push_back("g_eta" + fmt_label(eta));
  std::vector<std::vector<double>> rows(grid.size());
  gaussclone::parallel_for(grid.size(), gaussclone::default_thread_count(),
                           [&](std::size_t i) {
    rows[i].push_back(grid[i]);
    for (const double eta : etas)
      rows[i].push_back(gaussclone::enhancement(grid[i], eta));
  });
  write_output(out, render_table(key, columns, rows, format));
  return 0;
}

int run_fig45(bool fig4, const std::vector<double>& grid,
              const std::vector<double>& settings, double fixed,
              const std::string& method_name, std::int64_t budget, std::uint64_t seed,
              const std::string& out, const std::string& format) {
  const gaussclone::EstimateMethod method = parse_method(method_name);
  const char* swept = fig4 ? "eta" : "epsilon";
  const std::string key = std::string(fig4 ? "fig4" : "fig5") +
                          ";alpha=" + join_labels(grid) + ";" + swept + "=" +
                          join_labels(settings) + ";" + (fig4 ? "epsilon" : "eta") +
                          "=" + fmt_label(fixed) + ";method=" + method_name +
                          ";budget=" + std::to_string(budget) +
                          ";seed=" + std::to_string(seed) + ";format=" + format;

  std::vector<std::string> columns{"alpha"};
  for (const double s : settings) {
    columns.push_back("h_e_" + std::string(swept) + fmt_label(s));
    columns.push_back("abs_err_" + std::string(swept) + fmt_label(s));
  }

  std::vector<std::vector<double>> rows(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) rows[i] = {grid[i]};
  for (std::size_t s = 0; s < settings.size(); ++s) {
    const double eta = fig4 ? settings[s] : fixed;
    const double eps = fig4 ? fixed : settings[s];
    // Distinct seed stream per curve; error_curve derives per-point seeds.
    const auto curve = gaussclone::error_curve(
        grid, eta, eps, method, budget, gaussclone::RandomStream::derive_seed(seed, s));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rows[i].push_back(curve[i].h_e);
      rows[i].push_back(curve[i].abs_error);
    }
  }
  write_output(out, render_table(key, columns, rows, format));
  return 0;
}

nlohmann::json clone_report_entry(const gaussclone::GaussianState& clone,
                                  const gaussclone::GaussianState& rho1,
                                  const gaussclone::GaussianState& rho2) {
  nlohmann::json entry;
  entry["state"] = gaussclone::state_to_json(clone);
  entry["fidelity_to_rho1"] = gaussclone::gaussian_fidelity(clone, rho1).fidelity;
  entry["fidelity_to_rho2"] = gaussclone::gaussian_fidelity(clone, rho2).fidelity;
  return entry;
}

int run_clone(const std::string& rho1_spec, const std::string& rho2_spec,
              const std::string& ancilla_spec, double tau1, double tau2,
              const std::string& gain_spec, double eta, const std::string& shot_spec,
              const std::string& out) {
  const gaussclone::GaussianState rho1 = gaussclone::parse_state_spec(rho1_spec);
  const gaussclone::GaussianState rho2 = gaussclone::parse_state_spec(rho2_spec);
  const gaussclone::GaussianState ancilla = gaussclone::parse_state_spec(ancilla_spec);

  double gain = 0.0;
  if (gain_spec == "auto1")
    gain = gaussclone::gain_select(gaussclone::CloneTarget::input1, tau1);
  else if (gain_spec == "auto2")
    gain = gaussclone::gain_select(gaussclone::CloneTarget::input2, tau1);
  else
    gain = parse_real(gain_spec, "--g");

  const gaussclone::ClonerConfig cfg(
      tau1, tau2, gain, gaussclone::GaussianMeasurement::heterodyne(eta), ancilla);
  const gaussclone::CloneResult result = gaussclone::run_averaged(rho1, rho2, cfg);

  nlohmann::json doc;
  doc["config"] = {{"rho1", rho1_spec}, {"rho2", rho2_spec}, {"ancilla", ancilla_spec},
                   {"tau1", tau1},      {"tau2", tau2},      {"gain", gain},
                   {"eta", eta}};
  doc["f1"] = result.f1;
  doc["f2"] = result.f2;
  doc["clone1"] = clone_report_entry(result.clone1, rho1, rho2);
  doc["clone2"] = clone_report_entry(result.clone2, rho1, rho2);

  if (!shot_spec.empty()) {
    const std::size_t comma = shot_spec.find(',');
    if (comma == std::string::npos)
      throw ParseError("--single-shot expects 're,im'");
    const std::complex<double> z(
        parse_real(shot_spec.substr(0, comma), "--single-shot"),
        parse_real(shot_spec.substr(comma + 1), "--single-shot"));
    const gaussclone::SingleShot shot = gaussclone::run_single_shot(rho1, rho2, cfg, z);
    doc["single_shot"] = {{"z", {z.real(), z.imag()}},
                          {"density", shot.density},
                          {"clone1", clone_report_entry(shot.clones.clone1, rho1, rho2)},
                          {"clone2", clone_report_entry(shot.clones.clone2, rho1, rho2)}};
  }
  write_output(out, doc.dump(2) + "\n");
  return 0;
}

int run_optimize(const std::string& input_spec, double eta, const std::string& out) {
  const gaussclone::GaussianState input = gaussclone::parse_state_spec(input_spec);
  const Eigen::Matrix2d sigma_k = input.cov();
  const Eigen::Matrix2d sigma_m = gaussclone::GaussianMeasurement::heterodyne(eta).cov();

  const double s_bar = gaussclone::optimal_ancilla_squeezing(sigma_k, sigma_m);
  const gaussclone::AncillaOptimum opt =
      gaussclone::maximize_fidelity_numeric(sigma_k, sigma_m);
  const double f_opt = gaussclone::symmetric_cloning_fidelity(
      sigma_k, gaussclone::squeezed_thermal(0.0, s_bar).cov(), sigma_m);
  const double f_vac = gaussclone::symmetric_cloning_fidelity(
      sigma_k, gaussclone::vacuum().cov(), sigma_m);

  nlohmann::json doc;
  doc["input"] = input_spec;
  doc["eta"] = eta;
  doc["s_bar"] = s_bar;
  doc["s_numeric"] = opt.s_star;
  doc["f_opt"] = f_opt;
  doc["f_gain"] = (f_opt - f_vac) / f_vac;
  doc["n_th_argmax"] = opt.n_th_argmax;
  write_output(out, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selective linear-optics cloning of Gaussian states"};
  app.require_subcommand(1);

  double r_min = 0.0, r_max = 1.5, r_step = 0.05;
  double alpha_min = 0.0, alpha_max = 3.0, alpha_step = 0.1;
  double eta = 1.0, epsilon = 1.0;
  std::vector<double> eta_list{1.0, 0.75, 0.5};
  std::vector<double> epsilon_list{1.0, 0.75, 0.5};
  std::string method = "quad", out_path, format = "csv";
  std::int64_t budget = 0;
  std::uint64_t seed = gaussclone::kDefaultSeed;
  double tau1 = 0.5, tau2 = 0.5;
  std::string gain_spec = "+1", ancilla_spec = "vacuum", shot_spec;
  std::string rho1_spec, rho2_spec, input_spec;

  const auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "Output path (stdout when omitted)");
    cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* fig2 = app.add_subcommand("fig2", "Cloning fidelity of squeezed inputs");
  fig2->add_option("--r-min", r_min);
  fig2->add_option("--r-max", r_max);
  fig2->add_option("--r-step", r_step);
  fig2->add_option("--eta", eta, "Heterodyne efficiency");
  add_format(fig2);

  CLI::App* fig3 = app.add_subcommand("fig3", "Fidelity enhancement vs squeezing");
  fig3->add_option("--r-min", r_min);
  fig3->add_option("--r-max", r_max);
  fig3->add_option("--r-step", r_step);
  fig3->add_option("--eta", eta_list, "Efficiencies, one curve each");
  add_format(fig3);

  CLI::App* fig4 = app.add_subcommand("fig4", "Communication error probability vs eta");
  fig4->add_option("--alpha-min", alpha_min);
  fig4->add_option("--alpha-max", alpha_max);
  fig4->add_option("--alpha-step", alpha_step);
  fig4->add_option("--eta", eta_list, "Heterodyne efficiencies, one curve each");
  fig4->add_option("--epsilon", epsilon, "Homodyne efficiency");
  fig4->add_option("--method", method)->check(CLI::IsMember({"quad", "mc"}));
  fig4->add_option("--budget", budget, "Evaluation budget (0 = method default)");
  fig4->add_option("--seed", seed);
  add_format(fig4);

  CLI::App* fig5 = app.add_subcommand("fig5", "Communication error probability vs epsilon");
  fig5->add_option("--alpha-min", alpha_min);
  fig5->add_option("--alpha-max", alpha_max);
  fig5->add_option("--alpha-step", alpha_step);
  fig5->add_option("--eta", eta, "Heterodyne efficiency");
  fig5->add_option("--epsilon", epsilon_list, "Homodyne efficiencies, one curve each");
  fig5->add_option("--method", method)->check(CLI::IsMember({"quad", "mc"}));
  fig5->add_option("--budget", budget, "Evaluation budget (0 = method default)");
  fig5->add_option("--seed", seed);
  add_format(fig5);

  CLI::App* clone = app.add_subcommand("clone", "Run the cloning machine once");
  clone->add_option("rho1", rho1_spec, "First input state spec")->required();
  clone->add_option("rho2", rho2_spec, "Second input state spec")->required();
  clone->add_option("--ancilla", ancilla_spec, "Ancilla state spec");
  clone->add_option("--tau1", tau1);
  clone->add_option("--tau2", tau2);
  clone->add_option("--g", gain_spec, "Feed-forward gain (real, auto1, or auto2)");
  clone->add_option("--eta", eta, "Heterodyne efficiency");
  clone->add_option("--single-shot", shot_spec, "Condition on outcome 're,im'");
  clone->add_option("--out", out_path, "Output path (stdout when omitted)");

  CLI::App* optimize = app.add_subcommand("optimize-ancilla", "Best ancilla squeezing");
  optimize->add_option("input", input_spec, "Input state spec")->required();
  optimize->add_option("--eta", eta, "Heterodyne efficiency");
  optimize->add_option("--out", out_path, "Output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "gaussclone: " << e.what() << "\n";
    return 2;
  }

  try {
    if (fig2->parsed())
      return run_fig2(make_grid(r_min, r_max, r_step, "fig2"), eta, out_path, format);
    if (fig3->parsed())
      return run_fig3(make_grid(r_min, r_max, r_step, "fig3"), eta_list, out_path,
                      format);
    if (fig4->parsed())
      return run_fig45(true, make_grid(alpha_min, alpha_max, alpha_step, "fig4"),
                       eta_list, epsilon, method, budget, seed, out_path, format);
    if (fig5->parsed())
      return run_fig45(false, make_grid(alpha_min, alpha_max, alpha_step, "fig5"),
                       epsilon_list, eta, method, budget, seed, out_path, format);
    if (clone->parsed())
      return run_clone(rho1_spec, rho2_spec, ancilla_spec, tau1, tau2, gain_spec, eta,
                       shot_spec, out_path);
    if (optimize->parsed()) return run_optimize(input_spec, eta, out_path);
    std::cerr << "gaussclone: no command selected\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "gaussclone: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "gaussclone: " << e.what() << "\n";
    return 2;
  } catch (const RangeError& e) {
    std::cerr << "gaussclone: " << e.what() << "\n";
    return 2;
  } catch (const gaussclone::ShapeError& e) {
    std::cerr << "gaussclone: " << e.what() << "\n";
    return 2;
  } catch (const gaussclone::DimensionError& e) {
    std::cerr << "gaussclone: " << e.what() << "\n";
    return 2;
  } catch (const gaussclone::IndexError& e) {
    std::cerr << "gaussclone: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "gaussclone: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gaussclone: internal error: " << e.what() << "\n";
    return 1;
  }
}
