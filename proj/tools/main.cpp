// Command-line front end: evaluate colored-link signatures, integrate them
// over subtori, run the twist-knot obstruction pipeline, and emit Seifert
// data files for braid closures and torus links.
//
// Exit codes: 0 success, 2 input error (bad flags, files, or data,
// including unresolved degenerate samples), 3 numeric budget exceeded.

#include "CLI11.hpp"

#include "clsig/abelian.hpp"
#include "clsig/integrate.hpp"
#include "clsig/seifert.hpp"
#include "clsig/signature.hpp"
#include "clsig/twistknot.hpp"
#include "clsig/util.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using clsig::input_error;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

clsig::TorusPoint parse_omega(const std::string& text, int colors) {
  clsig::TorusPoint w;
  for (const std::string& part : split(text, ',')) {
    w.coords.push_back(clsig::Angle::parse(part));
  }
  if (w.dim() != colors) {
    std::ostringstream os;
    os << "--omega has " << w.dim() << " coordinate(s) but the data has " << colors
       << " color(s)";
    throw input_error(os.str());
  }
  return w;
}

std::vector<int> parse_word(const std::string& text) {
  std::vector<int> letters;
  std::string normalized = text;
  for (char& c : normalized) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(normalized);
  std::string token;
  while (is >> token) {
    try {
      size_t used = 0;
      long long v = std::stoll(token, &used);
      if (used != token.size() || v == 0 || v > 1000000 || v < -1000000) {
        throw std::invalid_argument(token);
      }
      letters.push_back(static_cast<int>(v));
    } catch (const std::logic_error&) {
      throw input_error("malformed braid letter \"" + token + "\" (expected nonzero integers)");
    }
  }
  return letters;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    clsig::atomic_write_file(out_path, text);
  }
}

std::string render_integral(const clsig::IntegralResult& r, const std::string& format) {
  std::ostringstream os;
  os.precision(17);
  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["value"] = r.value;
    doc["grid"] = r.grid;
    doc["estimated_error"] = r.estimated_error;
    doc["degenerate_samples"] = r.degenerate_samples;
    doc["budget_exceeded"] = r.budget_exceeded;
    os << doc.dump(2) << "\n";
  } else if (format == "csv") {
    os << "value,grid,estimated_error,degenerate_samples,budget_exceeded\n";
    os << r.value << ',' << r.grid << ',' << r.estimated_error << ',' << r.degenerate_samples
       << ',' << (r.budget_exceeded ? 1 : 0) << "\n";
  } else {
    os << "value=" << r.value << " grid=" << r.grid << " estimated_error=" << r.estimated_error
       << " degenerate_samples=" << r.degenerate_samples
       << " budget_exceeded=" << (r.budget_exceeded ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string classification_line(const clsig::TwistClassification& c) {
  std::ostringstream os;
  os << clsig::class_name(c.cls);
  if (c.n >= 0) {
    os << " (" << c.m << " = " << clsig::factorization_str(c) << ")";
  }
  return os.str();
}

nlohmann::ordered_json audit_to_json(const clsig::ExceptionAudit& a) {
  nlohmann::ordered_json doc;
  doc["n"] = a.n;
  doc["classification"] = clsig::class_name(a.classification.cls);
  doc["four_n_plus_one"] = a.classification.m.convert_to<long long>();
  doc["factorization"] = clsig::factorization_str(a.classification);
  nlohmann::ordered_json decs = nlohmann::ordered_json::array();
  for (const auto& [dec, f] : a.decomposition_f) {
    decs.push_back({{"a", dec.a}, {"b", dec.b}, {"f", f}});
  }
  doc["decompositions"] = std::move(decs);
  doc["x_witness"] = a.x_witness ? nlohmann::ordered_json(*a.x_witness)
                                 : nlohmann::ordered_json(nullptr);
  doc["verdict"] = a.obstructed ? "obstructed" : "candidate-exception";
  if (a.f_witness) {
    doc["witness"] = {{"a", a.f_witness->a},
                      {"b", a.f_witness->b},
                      {"f", clsig::f_value(a.f_witness->a, a.f_witness->b)}};
  } else if (a.x_witness) {
    doc["witness"] = {{"x", *a.x_witness}};
  } else {
    doc["witness"] = nullptr;
  }
  doc["tamulis_removed"] = a.tamulis_removed;
  return doc;
}

std::string join_list(const std::vector<long long>& values) {
  if (values.empty()) return "(none)";
  std::ostringstream os;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) os << ' ';
    os << values[i];
  }
  return os.str();
}

std::string render_exceptions_text(const clsig::ExceptionsReport& rep, bool paper_diff) {
  std::ostringstream os;
  os << "exceptions search: nmax=" << rep.nmax
     << " mode=" << (rep.strict_geometry ? "strict (a>=b)" : "default") << "\n";
  if (rep.self_consistency_bound) {
    os << "self-consistency bound: every candidate exception satisfies n <= "
       << *rep.self_consistency_bound << " (max a^2-a+b^2 over f<=0)\n";
  } else {
    os << "self-consistency bound: none in strict mode (values whose only decompositions "
          "have a < b are vacuous candidates at every size)\n";
  }
  for (const auto& a : rep.audits) {
    os << "n=" << a.n << " [" << a.classification.m << " = "
       << clsig::factorization_str(a.classification) << "] "
       << (a.obstructed ? "obstructed" : "candidate-exception") << "; decompositions:";
    if (a.decomposition_f.empty()) {
      os << " (none";
      os << (rep.strict_geometry ? " with a>=b)" : ")");
    } else {
      for (const auto& [dec, f] : a.decomposition_f) {
        os << " (" << dec.a << "," << dec.b << ") f=" << f;
      }
    }
    if (a.x_witness) {
      os << "; x-witness: x=" << *a.x_witness;
    } else {
      os << "; x-witness: none";
    }
    os << "\n";
  }
  os << "candidates (" << rep.candidates.size() << "): " << join_list(rep.candidates) << "\n";
  os << "tamulis-filtered (" << rep.filtered.size() << "): " << join_list(rep.filtered) << "\n";

  if (paper_diff) {
    clsig::FixtureDiff dc = clsig::diff_lists(rep.candidates, clsig::kReferenceCandidates.data(),
                                              clsig::kReferenceCandidates.size());
    clsig::FixtureDiff df = clsig::diff_lists(rep.filtered, clsig::kReferenceFiltered.data(),
                                              clsig::kReferenceFiltered.size());
    os << "paper-diff candidates: missing from computed: " << join_list(dc.missing)
       << "; extra in computed: " << join_list(dc.extra) << "\n";
    for (long long n : dc.missing) {
      for (const auto& a : rep.audits) {
        if (a.n != n) continue;
        if (a.f_witness) {
          os << "  n=" << n << ": obstructed by decomposition (" << a.f_witness->a << ","
             << a.f_witness->b << ") with f=" << clsig::f_value(a.f_witness->a, a.f_witness->b)
             << "\n";
        } else if (a.x_witness) {
          os << "  n=" << n << ": obstructed by x=" << *a.x_witness << "\n";
        }
      }
    }
    os << "paper-diff filtered: missing from computed: " << join_list(df.missing)
       << "; extra in computed: " << join_list(df.extra) << "\n";
  }
  return os.str();
}

std::string render_exceptions_json(const clsig::ExceptionsReport& rep, bool paper_diff) {
  nlohmann::ordered_json doc;
  doc["nmax"] = rep.nmax;
  doc["strict_geometry"] = rep.strict_geometry;
  doc["self_consistency_bound"] = rep.self_consistency_bound
                                      ? nlohmann::ordered_json(*rep.self_consistency_bound)
                                      : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json audits = nlohmann::ordered_json::array();
  for (const auto& a : rep.audits) audits.push_back(audit_to_json(a));
  doc["audits"] = std::move(audits);
  doc["candidates"] = rep.candidates;
  doc["tamulis_filtered"] = rep.filtered;
  if (paper_diff) {
    clsig::FixtureDiff dc = clsig::diff_lists(rep.candidates, clsig::kReferenceCandidates.data(),
                                              clsig::kReferenceCandidates.size());
    clsig::FixtureDiff df = clsig::diff_lists(rep.filtered, clsig::kReferenceFiltered.data(),
                                              clsig::kReferenceFiltered.size());
    doc["paper_diff"] = {
        {"candidates", {{"missing", dc.missing}, {"extra", dc.extra}}},
        {"filtered", {{"missing", df.missing}, {"extra", df.extra}}},
    };
  }
  return doc.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"colored-link signature functions, torus integrals, and the twist-knot "
               "obstruction pipeline"};
  app.require_subcommand(1);
  std::function<int()> action;

  // --- sig -------------------------------------------------------------
  auto* sig = app.add_subcommand("sig", "evaluate the signature at one torus point");
  {
    auto link = std::make_shared<std::string>();
    auto omega = std::make_shared<std::string>();
    auto zero_threshold = std::make_shared<double>(1e-9);
    sig->add_option("--link", *link, "Seifert data file (JSON)")->required();
    sig->add_option("--omega", *omega,
                    "comma-separated coordinate angles in turns (\"p/q\" or decimal)")
        ->required();
    sig->add_option("--zero-threshold", *zero_threshold,
                    "relative eigenvalue zero threshold in (0,1)");
    sig->callback([&action, link, omega, zero_threshold] {
      action = [link, omega, zero_threshold]() {
        clsig::ColoredSeifertData d = clsig::load_seifert_file(*link);
        clsig::TorusPoint w = parse_omega(*omega, d.colors);
        clsig::SigResult r = clsig::cf_signature(d, w, *zero_threshold);
        if (r.degenerate_input) {
          std::cerr << "warning: a coordinate of omega sits at angle 0 (omega_i = 1); the "
                       "naive value of the degenerate form is reported — the honest "
                       "extension needs doubled-link data (sigma_hat)\n";
        }
        std::cout << "signature=" << r.signature << " nullity=" << r.nullity << "\n";
        return 0;
      };
    });
  }

  // --- integrate ---------------------------------------------------------
  auto* integrate = app.add_subcommand(
      "integrate", "average the signature over a subtorus of the unit torus");
  {
    auto link = std::make_shared<std::string>();
    auto group = std::make_shared<std::string>();
    auto lpm = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto samples_out = std::make_shared<std::string>();
    auto format = std::make_shared<std::string>("text");
    auto opts = std::make_shared<clsig::IntegrateOptions>();
    auto single_grid = std::make_shared<bool>(false);
    integrate->add_option("--link", *link, "Seifert data file (JSON)")->required();
    integrate->add_option("--group", *group,
                          "abelian presentation: \"Z^n\" or \"n=2; rel=1,1\"; defaults to the "
                          "full torus");
    integrate->add_option("--lpm", *lpm,
                          "doubled-link Seifert data (2n colors) for degenerate samples");
    integrate->add_option("--grid", opts->grid, "points per free dimension (default 1024)");
    integrate->add_option("--tol", opts->tol, "refinement tolerance (default 0.02)");
    integrate->add_option("--workers", opts->workers, "evaluation threads (default 1)");
    integrate->add_option("--format", *format, "output format: text, json, or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    integrate->add_option("--out", *out, "write the result to a file instead of stdout");
    integrate->add_option("--samples-out", *samples_out,
                          "write per-sample CSV rows for the final grid to a file");
    integrate->add_flag("--fallback-degenerate", opts->fallback_degenerate,
                        "authorize the naive signature at degenerate samples");
    integrate->add_flag("--single-grid", *single_grid,
                        "evaluate exactly --grid points per dimension, no refinement");
    integrate->add_option("--zero-threshold", opts->zero_threshold,
                          "relative eigenvalue zero threshold in (0,1)");
    integrate->callback([&action, link, group, lpm, out, samples_out, format, opts,
                         single_grid] {
      action = [link, group, lpm, out, samples_out, format, opts, single_grid]() {
        clsig::ColoredSeifertData d = clsig::load_seifert_file(*link);
        std::optional<clsig::ColoredSeifertData> dpm;
        if (!lpm->empty()) dpm = clsig::load_seifert_file(*lpm);
        clsig::AbelianPresentation pres;
        if (group->empty()) {
          pres.generators = d.colors;
        } else {
          pres = clsig::parse_presentation(*group);
        }
        clsig::IntegrateOptions o = *opts;
        o.refine = !*single_grid;
        std::ostringstream csv;
        if (!samples_out->empty()) o.samples_out = &csv;
        clsig::IntegralResult r = clsig::rho2(d, pres, dpm ? &*dpm : nullptr, o);
        if (!samples_out->empty()) clsig::atomic_write_file(*samples_out, csv.str());
        emit(render_integral(r, *format), *out);
        return r.budget_exceeded ? 3 : 0;
      };
    });
  }

  // --- twist -------------------------------------------------------------
  auto* twist = app.add_subcommand("twist", "twist-knot order and obstruction reports");
  twist->require_subcommand(1);
  {
    auto* cls = twist->add_subcommand("classify", "algebraic concordance order of one n");
    auto n_pos = std::make_shared<long long>(0);
    auto has_n = std::make_shared<bool>(false);
    auto opt =
        cls->add_option("n,--n", *n_pos, "twist parameter (use --n=-K for negative values)");
    cls->callback([&action, n_pos, has_n, opt] {
      *has_n = opt->count() > 0;
      action = [n_pos, has_n]() {
        if (!*has_n) throw input_error("twist classify needs a value: positional n or --n");
        std::cout << classification_line(clsig::classify(*n_pos)) << "\n";
        return 0;
      };
    });

    auto* exc = twist->add_subcommand("exceptions", "audit candidate exceptions up to nmax");
    auto nmax = std::make_shared<long long>(0);
    auto paper_diff = std::make_shared<bool>(false);
    auto strict = std::make_shared<bool>(false);
    auto format = std::make_shared<std::string>("text");
    auto out = std::make_shared<std::string>();
    exc->add_option("--nmax", *nmax, "audit every Order2 n up to this bound")->required();
    exc->add_flag("--paper-diff", *paper_diff,
                  "compare against the published 39- and 12-item reference lists");
    exc->add_flag("--strict-geometry", *strict, "only consider decompositions with a >= b");
    exc->add_option("--format", *format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    exc->add_option("--out", *out, "write the report to a file instead of stdout");
    exc->callback([&action, nmax, paper_diff, strict, format, out] {
      action = [nmax, paper_diff, strict, format, out]() {
        clsig::ExceptionsReport rep = clsig::exceptions(*nmax, *strict);
        std::string text = *format == "json" ? render_exceptions_json(rep, *paper_diff)
                                             : render_exceptions_text(rep, *paper_diff);
        emit(text, *out);
        return 0;
      };
    });
  }

  // --- braid -------------------------------------------------------------
  auto* braid = app.add_subcommand("braid", "Seifert data of a braid closure");
  {
    auto strands = std::make_shared<int>(0);
    auto word = std::make_shared<std::string>();
    auto label = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    braid->add_option("--strands", *strands, "number of strands (>= 1)")->required();
    braid->add_option("--word", *word,
                      "letters as signed generator indices, e.g. \"1 1 1\" or \"1,-2,1\"");
    braid->add_option("--label", *label, "label stored in the output file");
    braid->add_option("--out", *out, "output Seifert data file")->required();
    braid->callback([&action, strands, word, label, out] {
      action = [strands, word, label, out]() {
        clsig::BraidWord w;
        w.strands = *strands;
        w.letters = parse_word(*word);
        clsig::ColoredSeifertData d = clsig::braid_seifert(w, *label);
        clsig::save_seifert_file(d, *out);
        return 0;
      };
    });
  }

  // --- torus -------------------------------------------------------------
  auto* torus = app.add_subcommand("torus", "Seifert data of a torus link");
  {
    auto p = std::make_shared<int>(0);
    auto q = std::make_shared<int>(0);
    auto label = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    torus->add_option("--p", *p, "strand count p >= 1")->required();
    torus->add_option("--q", *q, "twisting q (negative for the mirror)")->required();
    torus->add_option("--label", *label, "label override");
    torus->add_option("--out", *out, "output Seifert data file")->required();
    torus->callback([&action, p, q, label, out] {
      action = [p, q, label, out]() {
        clsig::ColoredSeifertData d = clsig::torus_link_data(*p, *q);
        if (!label->empty()) d.label = *label;
        clsig::save_seifert_file(d, *out);
        return 0;
      };
    });
  }

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
    return action ? action() : 2;
  } catch (const clsig::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const clsig::overflow_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
