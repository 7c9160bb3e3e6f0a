#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "misodof/errors.hpp"
#include "misodof/pattern_analysis.hpp"
#include "misodof/polytope.hpp"
#include "misodof/region_builder.hpp"
#include "misodof/schemes.hpp"
#include "misodof/simulate.hpp"

using nlohmann::json;
using namespace misodof;

namespace {

// Exit codes: 0 success, 2 parse/input error, 3 infeasible scheme,
// 4 dimension guard, 1 anything else.
enum ExitCode { kOk = 0, kInternal = 1, kParse = 2, kInfeasible = 3, kGuard = 4 };

// Every number appears as an exact fraction plus a decimal rendering;
// the decimal never replaces the exact field.
json rat_j(const Rational& r) {
  return json{{"exact", r.str()}, {"approx", r.to_double()}};
}

json point_j(const DofPoint& p) {
  json out = json::array();
  for (const auto& c : p) out.push_back(rat_j(c));
  return out;
}

json marginals_j(const MarginalProfile& m) {
  json users = json::array();
  for (int u = 0; u < m.size(); ++u) {
    users.push_back(json{{"user", u + 1},
                         {"lambda_P", rat_j(m.user(u).p)},
                         {"lambda_D", rat_j(m.user(u).d)},
                         {"lambda_N", rat_j(m.user(u).n)}});
  }
  return users;
}

json ineq_j(const LinearInequality& ineq) {
  json coeffs = json::array();
  for (const auto& c : ineq.coeffs) coeffs.push_back(rat_j(c));
  return json{{"coeffs", std::move(coeffs)},
              {"rhs", rat_j(ineq.rhs)},
              {"family", family_name(ineq.family)},
              {"label", ineq.label},
              {"text", ineq.str()}};
}

json pattern_j(const CsitPattern& p) {
  json rows = json::array();
  for (int u = 0; u < p.users(); ++u) {
    std::string row;
    for (int t = 0; t < p.slots(); ++t) row.push_back(to_char(p.state(u, t)));
    rows.push_back(row);
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

// Shared region-source flags: a pattern file, direct per-user triples,
// or a symmetric profile. If both a pattern and direct marginals are
// given, the pattern wins and a warning goes to stderr.
struct RegionSource {
  std::string pattern_file;
  std::string marginals_text;
  int k = 0;
  std::string lp_text, ld_text;
  bool symmetric = false;
  bool tightened = false;

  std::optional<CsitPattern> pattern;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--pattern", pattern_file,
                    "pattern file: one line per user over {P,D,N}");
    cmd->add_option("--marginals", marginals_text,
                    "per-user triples lambda_P,lambda_D,lambda_N joined by ';'");
    cmd->add_option("--k", k, "number of users (symmetric profile)");
    cmd->add_option("--lp", lp_text, "symmetric lambda_P, e.g. 2/3");
    cmd->add_option("--ld", ld_text, "symmetric lambda_D");
    cmd->add_flag("--symmetric", symmetric, "treat --lp/--ld as a symmetric profile");
    cmd->add_flag("--tightened", tightened,
                  "intersect with the joint-probability constraints (needs --pattern, K=3)");
  }

  MarginalProfile resolve() {
    if (!pattern_file.empty()) {
      if (!marginals_text.empty() || !lp_text.empty())
        std::cerr
            << "warning: both a pattern and direct marginals given; the pattern wins\n";
      pattern = CsitPattern::parse(read_file(pattern_file));
      return marginals_of(*pattern);
    }
    if (!marginals_text.empty()) {
      std::vector<UserMarginals> users;
      for (const auto& triple : split(marginals_text, ';')) {
        const auto parts = split(triple, ',');
        if (parts.size() != 3)
          throw std::invalid_argument("--marginals: expected three values per user");
        users.push_back({Rational::parse(parts[0]), Rational::parse(parts[1]),
                         Rational::parse(parts[2])});
      }
      return MarginalProfile(std::move(users));
    }
    if (k > 0 && !lp_text.empty()) {
      return MarginalProfile::symmetric(
          k, Rational::parse(lp_text),
          ld_text.empty() ? Rational(0) : Rational::parse(ld_text));
    }
    throw std::invalid_argument(
        "no region source: give --pattern, --marginals, or --k with --lp/--ld");
  }

  Region region() {
    const MarginalProfile m = resolve();
    if (tightened) {
      if (!pattern) throw std::invalid_argument("--tightened needs --pattern");
      return tightened_region(*pattern);
    }
    return build_region(m);
  }

  json inputs_json(const MarginalProfile& m) const {
    json in;
    if (pattern) {
      in["pattern"] = pattern_j(*pattern);
      in["pattern_file"] = pattern_file;
    }
    in["marginals"] = marginals_j(m);
    in["tightened"] = tightened;
    return in;
  }
};

std::vector<Rational> parse_weights(const std::string& text, int k) {
  if (text.empty()) return std::vector<Rational>(k, Rational(1));
  std::vector<Rational> w;
  for (const auto& part : split(text, ',')) w.push_back(Rational::parse(part));
  if (static_cast<int>(w.size()) != k)
    throw std::invalid_argument("--weights: expected " + std::to_string(k) + " entries");
  return w;
}

std::vector<int> parse_user_list(const std::string& text, int k) {
  std::vector<int> users;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) continue;
    const int u = std::stoi(part);
    if (u < 1 || u > k) throw std::invalid_argument("--subset: user out of range");
    users.push_back(u - 1);
  }
  return users;
}

std::vector<double> parse_snr_db(const std::string& text) {
  std::vector<double> powers;
  if (text.empty()) return powers;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) continue;
    powers.push_back(std::pow(10.0, std::stod(part) / 10.0));
  }
  return powers;
}

std::string join_args(int argc, char** argv) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    if (i) cmd.push_back(' ');
    cmd += argv[i];
  }
  return cmd;
}

struct BoundCmd {
  RegionSource source;
  bool dedup = false;
  bool irredundant = false;

  void run(json& doc) {
    const MarginalProfile m = source.resolve();
    Region region = source.region();
    const bool plain = !source.tightened && !dedup && !irredundant;
    if (dedup) region = dedup_region(region);
    if (irredundant) region = remove_redundant(region);

    doc["inputs"] = source.inputs_json(m);
    json results;
    results["count"] = region.ineqs.size();
    if (plain) results["count_formula"] = expected_inequality_count(m.size());
    json ineqs = json::array();
    for (const auto& ineq : region.ineqs) ineqs.push_back(ineq_j(ineq));
    results["inequalities"] = std::move(ineqs);
    doc["results"] = std::move(results);
  }
};

struct MaxsumCmd {
  RegionSource source;
  std::string weights_text;

  void run(json& doc) {
    const MarginalProfile m = source.resolve();
    const Region region = source.region();
    const auto weights = parse_weights(weights_text, region.dim);
    const LpResult lp = lp_max(region, weights);

    doc["inputs"] = source.inputs_json(m);
    json w = json::array();
    for (const auto& x : weights) w.push_back(rat_j(x));
    doc["inputs"]["weights"] = std::move(w);

    json results;
    switch (lp.status) {
      case LpStatus::optimal:
        results["status"] = "optimal";
        results["value"] = rat_j(lp.value);
        results["optimizer"] = point_j(lp.optimizer);
        break;
      case LpStatus::unbounded:
        results["status"] = "unbounded";
        break;
      case LpStatus::infeasible:
        results["status"] = "infeasible";
        break;
    }
    doc["results"] = std::move(results);
  }
};

struct VerticesCmd {
  RegionSource source;

  void run(json& doc) {
    const MarginalProfile m = source.resolve();
    const auto verts = vertices(source.region());
    const auto pareto = pareto_maximal_flags(verts);

    doc["inputs"] = source.inputs_json(m);
    json list = json::array();
    for (size_t i = 0; i < verts.size(); ++i) {
      list.push_back(
          json{{"point", point_j(verts[i])}, {"pareto_maximal", bool(pareto[i])}});
    }
    doc["results"] = json{{"count", verts.size()}, {"vertices", std::move(list)}};
  }
};

struct SimulateCmd {
  std::string scheme;
  int k = 3;
  std::string lp_text = "0", ld_text = "0";
  int favored = 1;
  std::string subset_text;
  int start_order = 1;
  int user = 1;
  int slots = 1;
  int antennas = 0;
  int trials = 100;
  std::uint64_t seed = 7;
  std::string snr_text;
  bool emit_schedule = false;

  void add_options(CLI::App* cmd, bool required_scheme, bool skip_shared = false) {
    auto* opt = cmd->add_option("--scheme", scheme,
                                "case-a | mat | hybrid | fig5 | alt24-17 | single-user");
    if (required_scheme) opt->required();
    if (!skip_shared) {
      cmd->add_option("--k", k, "number of users");
      cmd->add_option("--lp", lp_text, "lambda_P, e.g. 1/3");
      cmd->add_option("--ld", ld_text, "lambda_D");
      cmd->add_option("--trials", trials, "Monte Carlo trials");
      cmd->add_option("--seed", seed, "RNG seed");
      cmd->add_option("--snr", snr_text, "SNR grid in dB, e.g. 20,30,40,50,60");
      cmd->add_option("--m", antennas, "transmit antennas (default K)");
    }
    cmd->add_option("--favored", favored, "favored user (case-a), 1-based");
    cmd->add_option("--subset", subset_text, "hybrid MAT subset, e.g. 1,2");
    cmd->add_option("--start-order", start_order, "MAT start order j");
    cmd->add_option("--user", user, "served user (single-user), 1-based");
    cmd->add_option("--slots", slots, "slot count (single-user)");
  }

  SchemeOutput build() const {
    if (scheme == "case-a")
      return case_a_corner_scheme(k, Rational::parse(lp_text), favored - 1);
    if (scheme == "mat") {
      Schedule schedule = mat_schedule(k, start_order);
      SchemeResult result = account(schedule);
      return SchemeOutput{std::move(schedule), std::move(result)};
    }
    if (scheme == "hybrid") {
      const auto subset = parse_user_list(subset_text, k);
      if (subset.empty()) throw std::invalid_argument("hybrid needs --subset");
      return hybrid_corner_scheme(Rational::parse(lp_text), Rational::parse(ld_text), k,
                                  subset);
    }
    if (scheme == "fig5") return overheard_retransmission_scheme();
    if (scheme == "alt24-17") return alternating_order2_scheme();
    if (scheme == "single-user") return single_user_scheme(k, user - 1, slots);
    throw std::invalid_argument("unknown --scheme '" + scheme + "'");
  }

  SchemeConfig config_for(const Schedule& schedule) const {
    return SchemeConfig{schedule.users,
                        antennas > 0 ? antennas : schedule.users,
                        parse_snr_db(snr_text), trials, seed};
  }

  void run(json& doc) {
    const SchemeOutput out = build();
    const int users = out.schedule.users;
    const SchemeConfig config = config_for(out.schedule);
    const DecodingVerdict verdict = simulate_decode(out.schedule, config);

    doc["inputs"] = json{{"scheme", scheme},
                         {"k", users},
                         {"antennas", config.antennas},
                         {"trials", trials}};
    doc["seed"] = seed;

    json results;
    json per_user = json::array();
    for (int u = 0; u < users; ++u) {
      per_user.push_back(json{{"user", u + 1},
                              {"dof", rat_j(out.result.dof[u])},
                              {"decoded_symbols", out.result.decoded[u]},
                              {"decodable", bool(verdict.decodable[u])},
                              {"min_margin", verdict.min_margin[u]}});
    }
    results["per_user"] = std::move(per_user);
    results["sum_dof"] = rat_j(out.result.sum_dof());
    results["slots"] = out.result.slots;
    results["message_order"] = out.result.message_order;
    results["all_decodable"] = verdict.all_decodable();
    results["failed_trials"] = verdict.failed_trials.size();
    results["realized_pattern"] = pattern_j(out.result.realized);
    results["realized_marginals"] = marginals_j(marginals_of(out.result.realized));
    const auto avg = average_marginals(marginals_of(out.result.realized));
    results["average_marginals"] = json{{"lambda_P", rat_j(avg.p)},
                                        {"lambda_D", rat_j(avg.d)},
                                        {"lambda_N", rat_j(avg.n)}};
    results["delayed_census"] = rat_j(delayed_census(out.schedule));
    if (scheme == "mat") results["min_delay"] = rat_j(mat_min_delay(k, start_order));

    if (!config.snr_powers.empty()) {
      json sj = json::array();
      for (double s : rate_slope(out.schedule, config)) sj.push_back(s);
      results["rate_slopes"] = std::move(sj);
    }
    if (emit_schedule) results["schedule"] = json::parse(out.schedule.to_json());
    doc["results"] = std::move(results);
  }
};

struct CompareCmd {
  std::string file_a, file_b;

  void run(json& doc) {
    const CsitPattern pa = CsitPattern::parse(read_file(file_a));
    const CsitPattern pb = CsitPattern::parse(read_file(file_b));
    const auto region_of = [](const CsitPattern& p) {
      return p.users() == 3 ? tightened_region(p) : build_region(marginals_of(p));
    };
    const CompareResult cmp = compare_regions(region_of(pa), region_of(pb));

    doc["inputs"] = json{{"first", json{{"file", file_a}, {"pattern", pattern_j(pa)}}},
                         {"second", json{{"file", file_b}, {"pattern", pattern_j(pb)}}},
                         {"same_marginals", marginals_of(pa) == marginals_of(pb)}};

    json results;
    std::string text;
    switch (cmp.relation) {
      case RegionRelation::equal:
        results["relation"] = "equal";
        text = "equal regions";
        break;
      case RegionRelation::r1_strict_subset:
        results["relation"] = "first-inside-second";
        text = "strict inclusion: first inside second";
        break;
      case RegionRelation::r2_strict_subset:
        results["relation"] = "second-inside-first";
        text = "strict inclusion: second inside first";
        break;
      case RegionRelation::incomparable:
        results["relation"] = "incomparable";
        text = "incomparable regions";
        break;
    }
    if (cmp.separator) {
      results["separator"] = point_j(*cmp.separator);
      results["violated"] = cmp.violated;
      std::ostringstream os;
      os << text << "; separator (";
      for (size_t i = 0; i < cmp.separator->size(); ++i) {
        if (i) os << ", ";
        os << (*cmp.separator)[i].str();
      }
      os << ") violates " << cmp.violated;
      text = os.str();
    }
    if (cmp.separator_r1_not_in_r2)
      results["first_outside_second"] = point_j(*cmp.separator_r1_not_in_r2);
    if (cmp.separator_r2_not_in_r1)
      results["second_outside_first"] = point_j(*cmp.separator_r2_not_in_r1);
    results["summary"] = text;
    doc["results"] = std::move(results);
  }
};

struct PlotdataCmd {
  std::string mode;
  std::string csv_path;
  RegionSource source;
  SimulateCmd sim;
  int trials = 100;
  std::uint64_t seed = 7;
  std::string snr_text;
  int antennas = 0;

  void run(json& doc) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::invalid_argument("cannot write '" + csv_path + "'");
    long rows = 0;

    if (mode == "rates") {
      if (sim.scheme.empty())
        throw std::invalid_argument("plotdata rates needs --scheme");
      // The scheme shares --k/--lp/--ld/--trials/--seed/--snr/--m with
      // the region source.
      if (source.k > 0) sim.k = source.k;
      if (!source.lp_text.empty()) sim.lp_text = source.lp_text;
      if (!source.ld_text.empty()) sim.ld_text = source.ld_text;
      sim.trials = trials;
      sim.seed = seed;
      sim.snr_text = snr_text;
      sim.antennas = antennas;
      const SchemeOutput out = sim.build();
      const SchemeConfig config = sim.config_for(out.schedule);
      if (config.snr_powers.empty())
        throw std::invalid_argument("plotdata rates needs --snr");
      const auto rates = mean_rates(out.schedule, config);

      csv << "snr_db";
      for (int u = 0; u < out.schedule.users; ++u) csv << ",rate_user" << (u + 1);
      csv << "\n";
      for (size_t ip = 0; ip < config.snr_powers.size(); ++ip) {
        csv << 10.0 * std::log10(config.snr_powers[ip]);
        for (double r : rates[ip]) csv << "," << r;
        csv << "\n";
        ++rows;
      }
      doc["inputs"] = json{{"scheme", sim.scheme}, {"trials", sim.trials}};
      doc["seed"] = sim.seed;
    } else if (mode == "vertices") {
      const MarginalProfile m = source.resolve();
      const Region region = source.region();
      const auto verts = vertices(region);
      const auto pareto = pareto_maximal_flags(verts);
      for (int i = 0; i < region.dim; ++i) csv << (i ? "," : "") << "d" << (i + 1);
      csv << ",pareto_maximal\n";
      for (size_t i = 0; i < verts.size(); ++i) {
        for (int c = 0; c < region.dim; ++c)
          csv << (c ? "," : "") << verts[i][c].to_double();
        csv << "," << (pareto[i] ? 1 : 0) << "\n";
        ++rows;
      }
      doc["inputs"] = source.inputs_json(m);
    } else {
      throw std::invalid_argument("plotdata mode must be 'rates' or 'vertices'");
    }

    doc["results"] = json{{"csv", csv_path}, {"rows", rows}};
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outer bounds, transmission schedules and Monte Carlo decodability "
               "checks for the DoF of the K-user MISO broadcast channel with "
               "alternating CSIT"};
  app.require_subcommand(1);

  BoundCmd bound;
  auto* bound_cmd = app.add_subcommand("bound", "outer-bound inequality system");
  bound.source.add_options(bound_cmd);
  bound_cmd->add_flag("--dedup", bound.dedup, "drop exact duplicate inequalities");
  bound_cmd->add_flag("--irredundant", bound.irredundant,
                      "keep only irredundant inequalities");

  MaxsumCmd maxsum;
  auto* maxsum_cmd = app.add_subcommand("maxsum", "maximize a weighted DoF sum");
  maxsum.source.add_options(maxsum_cmd);
  maxsum_cmd->add_option("--weights", maxsum.weights_text,
                         "objective weights, e.g. 2,2,1 (default all ones)");

  VerticesCmd verts;
  auto* verts_cmd = app.add_subcommand("vertices", "exact corner points (K <= 4)");
  verts.source.add_options(verts_cmd);

  SimulateCmd sim;
  auto* sim_cmd =
      app.add_subcommand("simulate", "build a scheme and Monte Carlo check it");
  sim.add_options(sim_cmd, true);
  sim_cmd->add_flag("--emit-schedule", sim.emit_schedule,
                    "include the full schedule JSON in the output");

  CompareCmd cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "compare the regions of two patterns");
  cmp_cmd->add_option("first", cmp.file_a, "first pattern file")->required();
  cmp_cmd->add_option("second", cmp.file_b, "second pattern file")->required();

  PlotdataCmd plot;
  auto* plot_cmd = app.add_subcommand("plotdata", "CSV emission for external plotting");
  plot_cmd->add_option("mode", plot.mode, "rates | vertices")->required();
  plot_cmd->add_option("--csv", plot.csv_path, "output CSV path")->required();
  plot.source.add_options(plot_cmd);
  plot.sim.add_options(plot_cmd, false, /*skip_shared=*/true);
  plot_cmd->add_option("--trials", plot.trials, "Monte Carlo trials");
  plot_cmd->add_option("--seed", plot.seed, "RNG seed");
  plot_cmd->add_option("--snr", plot.snr_text, "SNR grid in dB");
  plot_cmd->add_option("--m", plot.antennas, "transmit antennas (default K)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  json doc;
  doc["command"] = join_args(argc, argv);
  try {
    if (bound_cmd->parsed()) bound.run(doc);
    else if (maxsum_cmd->parsed()) maxsum.run(doc);
    else if (verts_cmd->parsed()) verts.run(doc);
    else if (sim_cmd->parsed()) sim.run(doc);
    else if (cmp_cmd->parsed()) cmp.run(doc);
    else if (plot_cmd->parsed()) plot.run(doc);
    std::cout << doc.dump(2) << "\n";
    return kOk;
  } catch (const PatternParseError& e) {
    std::cerr << "error: " << e.what() << " (row " << e.row() << ", col " << e.col()
              << ")\n";
    return kParse;
  } catch (const InfeasibleSchemeError& e) {
    std::cerr << "error: " << e.what()
              << "\n  failed condition: " << e.failed_condition() << "\n";
    return kInfeasible;
  } catch (const DimensionGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGuard;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
