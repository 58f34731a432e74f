#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "atf/atf.hpp"

using namespace atf;

namespace {

constexpr int kOk = 0, kFailed = 1, kMalformed = 2;

std::string slurp(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const io::Json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error("io", "cannot write " + out);
  f << j.dump(2) << "\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("io", "cannot write " + path);
  f << text;
}

std::optional<Rational> epsilon_option(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_rational(s);
}

std::vector<Variant> variants_for(const std::string& cases) {
  std::vector<std::string> wanted;
  std::stringstream ss(cases);
  for (std::string t; std::getline(ss, t, ',');)
    if (!t.empty()) wanted.push_back(t);
  std::vector<Variant> out;
  for (const auto& w : wanted) {
    bool any = false;
    for (const auto& v : all_variants())
      if (to_string(v.tag) == w || v.name == w) {
        out.push_back(v);
        any = true;
      }
    if (!any) throw ParseError("unknown case " + w);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Almost toric fibrations for log Calabi-Yau pairs"};
  app.require_subcommand(1);

  std::string input = "-", output, svg, epsilon, diagram_path, cases = "i,ii,iii,iv,v";
  bool uncertified = false;
  int samples = 1000, max_rank = 10;
  unsigned long seed = 1;

  auto add_io = [&](CLI::App* c) {
    c->add_option("input", input, "JSON input file, - for stdin");
    c->add_option("-o,--output", output, "output file (default stdout)");
  };
  auto* reduce_cmd = app.add_subcommand("reduce", "reduced model and blowup trace");
  add_io(reduce_cmd);
  auto* replace_cmd = app.add_subcommand("replace", "epsilon-replacement X_eps");
  add_io(replace_cmd);
  replace_cmd->add_option("--epsilon", epsilon, "replacement size in normalized units");
  auto* toric_cmd = app.add_subcommand("toric-model", "exceptional set, toric model and chopped trapezoid");
  add_io(toric_cmd);
  toric_cmd->add_option("--epsilon", epsilon, "replacement size in normalized units");
  auto* pack_cmd = app.add_subcommand("pack", "packing problem: theta bounds, point, triangles");
  add_io(pack_cmd);
  pack_cmd->add_option("--epsilon", epsilon, "replacement size in normalized units");
  auto* realize_cmd = app.add_subcommand("realize", "bitten diagram for a pair");
  add_io(realize_cmd);
  realize_cmd->add_option("--epsilon", epsilon, "replacement size in normalized units");
  realize_cmd->add_option("--svg", svg, "also render the diagram to this SVG file");
  realize_cmd->add_flag("--allow-uncertified", uncertified, "fall back to the exact solver when the theta check fails");
  auto* verify_cmd = app.add_subcommand("verify", "round-trip check of a diagram against a pair");
  add_io(verify_cmd);
  verify_cmd->add_option("--diagram", diagram_path, "diagram JSON (default: realize the pair)");
  auto* manifold_cmd = app.add_subcommand("manifold", "ATF diagram for a blowup of CP2 from {c, deltas}");
  add_io(manifold_cmd);
  manifold_cmd->add_option("--svg", svg, "also render the diagram to this SVG file");
  auto* sweep_cmd = app.add_subcommand("sweep", "randomized property sweep");
  sweep_cmd->add_option("--cases", cases, "comma separated cases or variant names");
  sweep_cmd->add_option("--samples", samples, "samples per variant");
  sweep_cmd->add_option("--seed", seed, "generator seed");
  sweep_cmd->add_option("--max-rank", max_rank, "largest n drawn");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kMalformed;
  }

  try {
    if (*reduce_cmd) {
      auto d = detail::normalized(io::pair(io::parse_text(slurp(input))));
      emit(io::reduced_model(reduced_model(d)), output);
    } else if (*replace_cmd) {
      auto d = detail::normalized(io::pair(io::parse_text(slurp(input))));
      emit(io::replacement(epsilon_replacement(reduced_model(d), d, epsilon_option(epsilon))), output);
    } else if (*toric_cmd) {
      auto d = detail::normalized(io::pair(io::parse_text(slurp(input))));
      emit(io::toric_model(reduce(d, epsilon_option(epsilon))), output);
    } else if (*pack_cmd) {
      auto j = io::parse_text(slurp(input));
      if (j.contains("polygon")) {
        auto p = io::packing_problem(j);
        auto o = solve_packing(p);
        emit(io::packing(p, std::nullopt, o, {}), output);
        return o ? kOk : kFailed;
      }
      auto r = realize(io::pair(j), {epsilon_option(epsilon), false});
      auto out = io::packing(r.report.problem, r.report.theta, r.report.point, r.report.triangles);
      out["params"] = io::trapezoid(r.report.params);
      emit(out, output);
      return r.report.lemma_holds ? kOk : kFailed;
    } else if (*realize_cmd) {
      auto r = realize(io::pair(io::parse_text(slurp(input))), {epsilon_option(epsilon), !uncertified});
      emit(io::realization(r), output);
      if (!svg.empty()) write_file(svg, render_svg(r.diagram));
      return r.report.roundtrip.ok ? kOk : kFailed;
    } else if (*verify_cmd) {
      auto d = io::pair(io::parse_text(slurp(input)));
      BittenDiagram g;
      if (diagram_path.empty()) {
        g = realize(d).diagram;
      } else {
        auto j = io::parse_text(slurp(diagram_path));
        g = io::diagram(j.contains("diagram") ? j.at("diagram") : j);
      }
      auto valid = validate_diagram(g);
      auto rt = verify_roundtrip(d, g);
      io::Json out{{"valid", valid.ok}, {"issues", valid.issues}, {"roundtrip", io::roundtrip(rt)}};
      emit(out, output);
      return valid.ok && rt.ok ? kOk : kFailed;
    } else if (*manifold_cmd) {
      auto m = atf_for_manifold(io::areas(io::parse_text(slurp(input))));
      emit(io::manifold(m), output);
      if (!svg.empty()) write_file(svg, render_svg(m.diagram));
    } else if (*sweep_cmd) {
      bool ok = true;
      io::Json out = io::Json::array();
      for (const auto& v : variants_for(cases)) {
        auto r = sweep_variant(v, samples, seed, max_rank);
        ok = ok && r.ok();
        out.push_back({{"variant", v.name},
                       {"samples", r.samples},
                       {"theta_failures", r.theta_failures},
                       {"toric_failures", r.toric_failures},
                       {"realize_failures", r.realize_failures},
                       {"roundtrip_failures", r.roundtrip_failures},
                       {"examples", r.examples}});
      }
      emit(out, output);
      return ok ? kOk : kFailed;
    }
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kMalformed;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kFailed;
  }
  return kOk;
}
