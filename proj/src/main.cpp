#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "mzv/numerics.hpp"
#include "mzv/relations.hpp"

using namespace mzv;

namespace {

std::string real_str(const BigReal& r, unsigned digits) {
  return r.value.str(digits, std::ios_base::fixed);
}

std::string bound_str(double b) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", b);
  return buf;
}

std::string csv_field(const std::string& s) { return "\"" + s + "\""; }

std::vector<std::uint32_t> parse_composition(const std::string& s) {
  std::vector<std::uint32_t> comp;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("composition must be comma-separated positive integers: '" + s +
                                  "'");
    comp.push_back(static_cast<std::uint32_t>(std::stoul(part)));
    if (comp.back() == 0) throw std::invalid_argument("composition parts are positive: '" + s + "'");
  }
  if (comp.empty()) throw std::invalid_argument("empty composition");
  if (comp.front() < 2)
    throw std::invalid_argument("divergent composition (needs r1 >= 2): '" + s + "'");
  return comp;
}

Word parse_y_word(const std::string& s) {
  Word w = parse_word(s, Alphabet::Y);
  if (w.alph == Alphabet::Y) return w;
  auto y = transcode(w);
  if (!y) throw std::invalid_argument("word has no Y transcription (trailing x0): '" + s + "'");
  return *y;
}

Word parse_x_word(const std::string& s) {
  Word w = parse_word(s, Alphabet::X);
  if (w.alph == Alphabet::X) return w;
  return *transcode(w);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
  f << text;
}

std::string table_to_csv(const RelationTable& t) {
  std::map<std::string, std::string> prov;
  for (const PivotEntry& p : t.certificate) prov[p.head.str()] = p.provenance;
  std::string out = "weight,kind,head,value,provenance\n";
  for (int wt = 2; wt <= t.max_weight; ++wt) {
    for (const auto& [head, rhs] : t.rewrites) {
      if (head.weight() != wt) continue;
      auto it = prov.find(head.str());
      std::string p = it != prov.end()
                          ? it->second
                          : "quasi_shuffle(" + word_from_composition(head.comp).str() + ")";
      out += std::to_string(wt) + ",rewrite," + csv_field(head.str()) + "," +
             csv_field(rhs.str()) + "," + csv_field(p) + "\n";
    }
    for (const ConstSymbol& s : t.irreducibles)
      if (s.weight() == wt)
        out += std::to_string(wt) + ",irreducible," + csv_field(s.str()) + ",,\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyzeta workbench: Lyndon bases, regularized zeta relations, certified numerics"};
  app.require_subcommand(1);

  // lyndon
  auto* cmd_lyndon = app.add_subcommand("lyndon", "list Lyndon words up to a weight");
  std::string ly_alph = "X";
  int ly_w = 4;
  std::string ly_fmt = "json";
  cmd_lyndon->add_option("--alphabet", ly_alph, "X or Y")->check(CLI::IsMember({"X", "Y"}));
  cmd_lyndon->add_option("--max-weight", ly_w, "weight cutoff")
      ->required()
      ->check(CLI::Range(1, 12));
  cmd_lyndon->add_option("--format", ly_fmt)->check(CLI::IsMember({"json", "markdown", "csv"}));

  // product
  auto* cmd_product = app.add_subcommand("product", "expand a shuffle or quasi-shuffle product");
  std::string pr_kind, pr_u, pr_v, pr_fmt = "json";
  cmd_product->add_option("--kind", pr_kind, "shuffle or stuffle")
      ->required()
      ->check(CLI::IsMember({"shuffle", "stuffle"}));
  cmd_product->add_option("U", pr_u, "left word")->required();
  cmd_product->add_option("V", pr_v, "right word")->required();
  cmd_product->add_option("--format", pr_fmt)->check(CLI::IsMember({"json", "markdown", "csv"}));

  // reg
  auto* cmd_reg = app.add_subcommand("reg", "regularized value of a word");
  std::string rg_kind, rg_word, rg_fmt = "json";
  cmd_reg->add_option("--kind", rg_kind, "shuffle, stuffle, or gamma")
      ->required()
      ->check(CLI::IsMember({"shuffle", "stuffle", "gamma"}));
  cmd_reg->add_option("WORD", rg_word)->required();
  cmd_reg->add_option("--format", rg_fmt)->check(CLI::IsMember({"json", "markdown", "csv"}));

  // relations
  auto* cmd_relations = app.add_subcommand("relations", "derive and reduce the relation table");
  int rl_w = 8;
  bool rl_duality = false, rl_hexagon = false;
  std::string rl_out, rl_fmt = "json", rl_cache;
  cmd_relations->add_option("--max-weight", rl_w)->check(CLI::Range(2, 12));
  cmd_relations->add_flag("--duality", rl_duality, "also derive duality relations");
  cmd_relations->add_flag("--hexagon", rl_hexagon, "also derive hexagon relations (weight <= 6)");
  cmd_relations->add_option("--out", rl_out, "write the table to a file");
  cmd_relations->add_option("--format", rl_fmt)->check(CLI::IsMember({"json", "markdown", "csv"}));
  cmd_relations->add_option("--cache", rl_cache, "cache directory for emitted tables");

  // zeta
  auto* cmd_zeta = app.add_subcommand("zeta", "evaluate a convergent multiple zeta value");
  std::string zt_comp, zt_fmt = "json";
  unsigned zt_prec = 40;
  cmd_zeta->add_option("COMPOSITION", zt_comp, "e.g. 2,1")->required();
  cmd_zeta->add_option("--prec", zt_prec, "decimal digits")->check(CLI::Range(20, 200));
  cmd_zeta->add_option("--format", zt_fmt)->check(CLI::IsMember({"json", "markdown", "csv"}));

  // gamma-const
  auto* cmd_gamma = app.add_subcommand("gamma-const", "generalized Euler constant of a Y word");
  std::string gc_word, gc_fmt = "json";
  unsigned gc_prec = 40;
  long gc_check = 0;
  cmd_gamma->add_option("WORD", gc_word)->required();
  cmd_gamma->add_option("--prec", gc_prec, "decimal digits")->check(CLI::Range(20, 200));
  cmd_gamma->add_option("--check", gc_check, "compare against the finite part of H_w(N)")
      ->check(CLI::Range(1000L, 100000000L));
  cmd_gamma->add_option("--format", gc_fmt)->check(CLI::IsMember({"json", "markdown", "csv"}));

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "numerically certify every derived relation");
  int vf_w = 6;
  unsigned vf_prec = 40;
  std::string vf_fmt = "json";
  cmd_verify->add_option("--max-weight", vf_w)->check(CLI::Range(2, 12));
  cmd_verify->add_option("--prec", vf_prec, "decimal digits")->check(CLI::Range(20, 200));
  cmd_verify->add_option("--format", vf_fmt)->check(CLI::IsMember({"json", "markdown", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_lyndon) {
      Alphabet al = ly_alph == "X" ? Alphabet::X : Alphabet::Y;
      auto words = lyndon_generate(al, ly_w);
      std::string text;
      if (ly_fmt == "json") {
        nlohmann::json j;
        j["alphabet"] = ly_alph;
        j["max_weight"] = ly_w;
        j["count"] = words.size();
        auto arr = nlohmann::json::array();
        for (const Word& w : words) arr.push_back(w.str());
        j["words"] = arr;
        text = j.dump(2) + "\n";
      } else if (ly_fmt == "csv") {
        text = "word,weight\n";
        for (const Word& w : words) text += w.str() + "," + std::to_string(w.weight()) + "\n";
      } else {
        for (const Word& w : words) text += w.str() + "\n";
      }
      emit(text, "");
      return 0;
    }

    if (*cmd_product) {
      Prod kind = pr_kind == "shuffle" ? Prod::shuffle : Prod::stuffle;
      Word u{Alphabet::X, {}}, v{Alphabet::X, {}};
      if (kind == Prod::stuffle) {
        u = parse_y_word(pr_u);
        v = parse_y_word(pr_v);
      } else {
        u = parse_word(pr_u);
        v = parse_word(pr_v);
        if (u.alph != v.alph) {
          if (u.alph == Alphabet::Y) u = *transcode(u);
          if (v.alph == Alphabet::Y) v = *transcode(v);
        }
      }
      QPoly p = apply_product(kind, QPoly::from_word(u, Rational(1)),
                              QPoly::from_word(v, Rational(1)));
      std::string ps = poly_to_string(p);
      std::string text;
      if (pr_fmt == "json") {
        nlohmann::json j{{"kind", pr_kind}, {"lhs", u.str()}, {"rhs", v.str()}, {"product", ps}};
        text = j.dump(2) + "\n";
      } else if (pr_fmt == "csv") {
        text = "kind,lhs,rhs,product\n" + pr_kind + "," + u.str() + "," + v.str() + "," +
               csv_field(ps) + "\n";
      } else {
        text = u.str() + " " + pr_kind + " " + v.str() + " = " + ps + "\n";
      }
      emit(text, "");
      return 0;
    }

    if (*cmd_reg) {
      Word w{Alphabet::X, {}};
      ConstPoly value;
      if (rg_kind == "shuffle") {
        w = parse_x_word(rg_word);
        value = zeta_shuffle_reg(w);
      } else {
        w = parse_y_word(rg_word);
        value = rg_kind == "stuffle" ? zeta_stuffle_reg(w) : gamma_reg(w);
      }
      std::string text;
      if (rg_fmt == "json") {
        nlohmann::json j{{"kind", rg_kind}, {"word", w.str()}, {"value", value.str()}};
        text = j.dump(2) + "\n";
      } else if (rg_fmt == "csv") {
        text = "kind,word,value\n" + rg_kind + "," + w.str() + "," + csv_field(value.str()) + "\n";
      } else {
        text = "reg_" + rg_kind + "(" + w.str() + ") = " + value.str() + "\n";
      }
      emit(text, "");
      return 0;
    }

    if (*cmd_relations) {
      std::string key = "relations-w" + std::to_string(rl_w) + (rl_duality ? "-duality" : "") +
                        (rl_hexagon ? "-hexagon" : "") + "." + rl_fmt;
      std::string text;
      bool cached = false;
      std::filesystem::path cache_file;
      if (!rl_cache.empty()) {
        std::filesystem::create_directories(rl_cache);
        cache_file = std::filesystem::path(rl_cache) / key;
        std::ifstream in(cache_file, std::ios::binary);
        if (in) {
          std::stringstream buf;
          buf << in.rdbuf();
          text = buf.str();
          cached = true;
        }
      }
      if (!cached) {
        std::vector<Relation> rels = derive_double_shuffle(rl_w);
        if (rl_duality && rl_w >= 3) {
          auto d = derive_duality(rl_w);
          rels.insert(rels.end(), d.begin(), d.end());
        }
        if (rl_hexagon) {
          auto h = hexagon_check(std::min(rl_w, 6));
          rels.insert(rels.end(), h.begin(), h.end());
        }
        RelationTable t = reduce_table(rels);
        if (rl_fmt == "json")
          text = table_to_json(t).dump(2) + "\n";
        else if (rl_fmt == "csv")
          text = table_to_csv(t);
        else
          text = table_to_markdown(t);
        if (!rl_cache.empty()) {
          std::ofstream out(cache_file, std::ios::binary);
          out << text;
        }
      }
      emit(text, rl_out);
      return 0;
    }

    if (*cmd_zeta) {
      auto comp = parse_composition(zt_comp);
      EvalContext ctx(zt_prec);
      BigReal v = zeta_value(comp, ctx);
      std::string text;
      if (zt_fmt == "json") {
        nlohmann::json j{{"composition", zt_comp},
                         {"digits", zt_prec},
                         {"value", real_str(v, zt_prec)},
                         {"bound", bound_str(v.bound)}};
        text = j.dump(2) + "\n";
      } else if (zt_fmt == "csv") {
        text = "composition,value,bound\n" + csv_field(zt_comp) + "," + real_str(v, zt_prec) +
               "," + bound_str(v.bound) + "\n";
      } else {
        text = "zeta(" + zt_comp + ") = " + real_str(v, zt_prec) + " +/- " + bound_str(v.bound) +
               "\n";
      }
      emit(text, "");
      return 0;
    }

    if (*cmd_gamma) {
      Word w = parse_y_word(gc_word);
      if (w.empty()) throw std::invalid_argument("gamma-const needs a nonempty word");
      ConstPoly sym = gamma_reg(w);
      EvalContext ctx(gc_prec);
      StdEvaluator ev{&ctx};
      auto [re, im] = eval_numeric<BigReal>(sym, ev);
      (void)im;
      std::string est_s, diff_s;
      if (gc_check > 0) {
        BigReal est = finite_part_estimate(w, gc_check, ctx);
        est_s = real_str(est, gc_prec);
        diff_s = bound_str(std::fabs((est.value - re.value).convert_to<double>()));
      }
      std::string text;
      if (gc_fmt == "json") {
        nlohmann::json j{{"word", w.str()},
                         {"symbolic", sym.str()},
                         {"digits", gc_prec},
                         {"value", real_str(re, gc_prec)},
                         {"bound", bound_str(re.bound)}};
        if (gc_check > 0) {
          j["check_N"] = gc_check;
          j["estimate"] = est_s;
          j["difference"] = diff_s;
        }
        text = j.dump(2) + "\n";
      } else if (gc_fmt == "csv") {
        text = "word,symbolic,value,bound\n" + w.str() + "," + csv_field(sym.str()) + "," +
               real_str(re, gc_prec) + "," + bound_str(re.bound) + "\n";
        if (gc_check > 0)
          text += "estimate@" + std::to_string(gc_check) + ",," + est_s + "," + diff_s + "\n";
      } else {
        text = "gamma_" + w.str() + " = " + sym.str() + "\n  = " + real_str(re, gc_prec) +
               " +/- " + bound_str(re.bound) + "\n";
        if (gc_check > 0)
          text += "  finite part at N=" + std::to_string(gc_check) + ": " + est_s +
                  " (difference " + diff_s + ")\n";
      }
      emit(text, "");
      return 0;
    }

    if (*cmd_verify) {
      std::vector<Relation> rels = derive_double_shuffle(vf_w);
      std::size_t n_ds = rels.size();
      if (vf_w >= 3) {
        auto d = derive_duality(vf_w);
        rels.insert(rels.end(), d.begin(), d.end());
      }
      std::size_t n_dual = rels.size() - n_ds;
      auto h = hexagon_check(std::min(vf_w, 6));
      rels.insert(rels.end(), h.begin(), h.end());

      const double tol = 1e-25;
      EvalContext ctx(vf_prec);
      double max_resid = 0;
      std::vector<std::pair<std::string, std::string>> failures;
      for (const Relation& r : rels) {
        auto [ok, resid] = check_vanishes(r.poly, ctx, tol);
        max_resid = std::max(max_resid, std::fabs(resid.approx()));
        if (!ok) failures.emplace_back(r.provenance(), bound_str(std::fabs(resid.approx())));
      }

      std::string text;
      if (vf_fmt == "json") {
        nlohmann::json j;
        j["max_weight"] = vf_w;
        j["digits"] = vf_prec;
        j["tolerance"] = bound_str(tol);
        j["families"] = {{"double_shuffle", n_ds}, {"duality", n_dual}, {"hexagon", h.size()}};
        j["checked"] = rels.size();
        j["max_residual"] = bound_str(max_resid);
        auto fails = nlohmann::json::array();
        for (const auto& [p, res] : failures) fails.push_back({{"provenance", p}, {"residual", res}});
        j["failures"] = fails;
        j["verified"] = failures.empty();
        text = j.dump(2) + "\n";
      } else if (vf_fmt == "csv") {
        text = "family,count\ndouble_shuffle," + std::to_string(n_ds) + "\nduality," +
               std::to_string(n_dual) + "\nhexagon," + std::to_string(h.size()) +
               "\nchecked," + std::to_string(rels.size()) + "\nfailures," +
               std::to_string(failures.size()) + "\n";
      } else {
        text = "# Verification to weight " + std::to_string(vf_w) + "\n\n" +
               std::to_string(rels.size()) + " relations (" + std::to_string(n_ds) +
               " double shuffle, " + std::to_string(n_dual) + " duality, " +
               std::to_string(h.size()) + " hexagon) at " + std::to_string(vf_prec) +
               " digits\nmax residual " + bound_str(max_resid) + ", tolerance " + bound_str(tol) +
               "\n";
        for (const auto& [p, res] : failures) text += "FAILED " + p + " residual " + res + "\n";
        text += failures.empty() ? "all verified\n" : "verification FAILED\n";
      }
      emit(text, "");
      return failures.empty() ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
