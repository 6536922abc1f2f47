// Command-line front end: consistency checking, query answering, query
// rewriting, canonical-model materialization, and hardness-instance
// generation over fuzzy DL-Lite_R ontologies.
//
// Exit codes: 0 success/consistent, 1 inconsistent, 2 usage or parse error,
// 3 unsupported semantics.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdlite/fdlite.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_tuple(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void print_answers(fdlite::AnswerSet answers, const std::string& format) {
  fdlite::sort_answers(answers);
  if (format == "json") {
    json rows = json::array();
    for (const fdlite::AnswerRow& r : answers.rows) {
      json row;
      row["tuple"] = r.tuple;
      if (r.degree) row["degree"] = r.degree->str();
      rows.push_back(row);
    }
    std::cout << json{{"answers", rows}, {"complete", true}}.dump() << "\n";
    return;
  }
  for (const fdlite::AnswerRow& r : answers.rows) {
    if (r.tuple.empty()) {
      std::cout << "()";
    } else {
      for (std::size_t i = 0; i < r.tuple.size(); ++i)
        std::cout << (i ? "\t" : "") << r.tuple[i];
    }
    if (r.degree) std::cout << "\t" << r.degree->str();
    std::cout << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"query answering over fuzzy DL-Lite_R ontologies"};
  app.require_subcommand(1);
  std::function<int()> action;

  // ---- check
  auto* check = app.add_subcommand("check", "decide ontology consistency");
  static std::string check_ont, check_tnorm = "godel", check_format = "tsv";
  check->add_option("ontology", check_ont)->required();
  check->add_option("--tnorm", check_tnorm);
  check->add_option("--format", check_format)->check(CLI::IsMember({"tsv", "json"}));
  check->callback([&] {
    action = [&]() {
      fdlite::Ontology o = fdlite::parse_ontology(read_file(check_ont));
      bool ok = fdlite::check_consistency(o, fdlite::tnorm_from_string(check_tnorm));
      if (check_format == "json")
        std::cout << json{{"consistent", ok}}.dump() << "\n";
      else
        std::cout << (ok ? "consistent" : "inconsistent") << "\n";
      return ok ? 0 : 1;
    };
  });

  // ---- query
  auto* query = app.add_subcommand("query", "answer a query over an ontology");
  static std::string q_ont, q_path, q_tnorm = "godel", q_format = "tsv";
  static std::string q_at_least, q_degree_of;
  static int q_top_k = -1;
  static bool q_threshold = false, q_positive = false, q_assume = false, q_binary = false;
  query->add_option("ontology", q_ont)->required();
  query->add_option("-q,--query", q_path)->required();
  query->add_option("--tnorm", q_tnorm);
  query->add_option("--format", q_format)->check(CLI::IsMember({"tsv", "json"}));
  query->add_option("--at-least", q_at_least, "degree query: all answers at this degree");
  query->add_option("--degree-of", q_degree_of, "degree of one comma-separated tuple");
  query->add_option("--top-k", q_top_k, "the k best-scoring answers");
  query->add_flag("--threshold", q_threshold, "answer a threshold query");
  query->add_flag("--positive", q_positive, "answers with positive degree");
  query->add_flag("--assume-consistent", q_assume);
  query->add_flag("--binary-search", q_binary, "bisect the degree levels in --degree-of");
  query->callback([&] {
    action = [&]() {
      int modes = (!q_at_least.empty()) + (!q_degree_of.empty()) + (q_top_k >= 0) +
                  q_threshold + q_positive;
      if (modes != 1)
        throw std::invalid_argument(
            "choose exactly one of --at-least, --degree-of, --top-k, --threshold, --positive");
      fdlite::QueryRequest req;
      req.tnorm = fdlite::tnorm_from_string(q_tnorm);
      req.query = fdlite::parse_query(read_file(q_path));
      req.assume_consistent = q_assume;
      req.binary_search = q_binary;
      if (!q_at_least.empty()) {
        req.mode = fdlite::QueryRequest::Mode::at_least;
        req.bound = fdlite::Degree::parse(q_at_least);
      } else if (!q_degree_of.empty()) {
        req.mode = fdlite::QueryRequest::Mode::degree_of;
        req.tuple = split_tuple(q_degree_of);
      } else if (q_top_k >= 0) {
        req.mode = fdlite::QueryRequest::Mode::top_k;
        req.k = static_cast<std::size_t>(q_top_k);
      } else if (q_threshold) {
        req.mode = fdlite::QueryRequest::Mode::threshold;
      } else {
        req.mode = fdlite::QueryRequest::Mode::positive;
      }
      fdlite::Ontology o = fdlite::parse_ontology(read_file(q_ont));
      print_answers(fdlite::run_request(o, req), q_format);
      return 0;
    };
  });

  // ---- rewrite
  auto* rewrite = app.add_subcommand("rewrite", "print the rewriting of a query");
  static std::string r_ont, r_path, r_tnorm = "godel";
  rewrite->add_option("ontology", r_ont)->required();
  rewrite->add_option("-q,--query", r_path)->required();
  rewrite->add_option("--tnorm", r_tnorm);
  rewrite->callback([&] {
    action = [&]() {
      fdlite::TNorm k = fdlite::tnorm_from_string(r_tnorm);
      fdlite::Ontology o = fdlite::parse_ontology(read_file(r_ont));
      fdlite::ParsedQuery pq = fdlite::parse_query(read_file(r_path));
      fdlite::ThresholdQuery tq =
          std::holds_alternative<fdlite::ThresholdQuery>(pq)
              ? std::get<fdlite::ThresholdQuery>(pq)
              : fdlite::cq_to_tq(std::get<fdlite::ConjunctiveQuery>(pq), fdlite::Degree::one());
      for (const fdlite::ThresholdQuery& d : fdlite::perfect_ref(tq, o.tbox, k).queries)
        std::cout << fdlite::serialize_query(d) << "\n";
      return 0;
    };
  });

  // ---- materialize
  auto* mat = app.add_subcommand("materialize", "dump the canonical interpretation");
  static std::string m_ont, m_tnorm = "godel", m_format = "tsv";
  static long m_budget = -1;
  mat->add_option("ontology", m_ont)->required();
  mat->add_option("--tnorm", m_tnorm);
  mat->add_option("--budget", m_budget, "cap on anonymous witnesses");
  mat->add_option("--format", m_format)->check(CLI::IsMember({"tsv", "json"}));
  mat->callback([&] {
    action = [&]() {
      fdlite::Ontology o = fdlite::normalize(fdlite::parse_ontology(read_file(m_ont)));
      fdlite::Budget budget =
          m_budget >= 0 ? fdlite::Budget{static_cast<std::size_t>(m_budget)}
                        : fdlite::Budget::default_for(o);
      auto res = fdlite::build_canonical(o, fdlite::tnorm_from_string(m_tnorm), budget);
      const fdlite::FuzzyInterpretation& i = res.interpretation;
      if (m_format == "json") {
        json concepts = json::array(), roles = json::array();
        for (const auto& [key, d] : i.concept_deg)
          concepts.push_back({{"concept", key.first},
                              {"element", i.domain[key.second]},
                              {"degree", d.str()}});
        for (const auto& [key, d] : i.role_deg)
          roles.push_back({{"role", std::get<0>(key)},
                           {"from", i.domain[std::get<1>(key)]},
                           {"to", i.domain[std::get<2>(key)]},
                           {"degree", d.str()}});
        std::cout << json{{"complete", res.complete},
                          {"concepts", concepts},
                          {"roles", roles}}.dump()
                  << "\n";
        return 0;
      }
      for (const auto& [key, d] : i.concept_deg)
        std::cout << "C\t" << key.first << "\t" << i.domain[key.second] << "\t" << d.str()
                  << "\n";
      for (const auto& [key, d] : i.role_deg)
        std::cout << "R\t" << std::get<0>(key) << "\t" << i.domain[std::get<1>(key)] << "\t"
                  << i.domain[std::get<2>(key)] << "\t" << d.str() << "\n";
      if (!res.complete)
        std::cerr << "materialization incomplete: witness budget exhausted\n";
      return 0;
    };
  });

  // ---- gen-hardness
  auto* gen = app.add_subcommand("gen-hardness",
                                 "encode a DIMACS 3-CNF as a Lukasiewicz Horn ontology");
  static std::string g_cnf;
  gen->add_option("cnf", g_cnf)->required();
  gen->callback([&] {
    action = [&]() {
      fdlite::CnfFormula f = fdlite::parse_dimacs(read_file(g_cnf));
      std::cout << fdlite::serialize_horn(fdlite::gen_ontology(f));
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return action();
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fdlite::SourceError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const fdlite::UnsupportedSemanticsError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const fdlite::InconsistentOntologyError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
