#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cadyn/core.hpp"
#include "cadyn/debruijn.hpp"
#include "cadyn/error.hpp"
#include "cadyn/reduction.hpp"
#include "cadyn/rule_io.hpp"
#include "cadyn/sft.hpp"
#include "cadyn/trace.hpp"

namespace cadyn::cli {
namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes `text` to `path`, or to `out` when no path was given.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    save_text(path, text);
  }
}

LocalRule load_rule_file(const std::string& path) {
  try {
    return load_rule(path);
  } catch (const ParseError& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

std::uint64_t default_nmax(const LocalRule& r) {
  const auto v = checked_pow(r.alphabet().size(), static_cast<unsigned>(r.width()));
  return v ? std::min<std::uint64_t>(*v, 1u << 20) : (1u << 20);
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

struct Budgets {
  double table = double(kDefaultTableBudget);
  double window = double(kDefaultWindowBudget);

  std::uint64_t table_u() const { return static_cast<std::uint64_t>(table); }
  TraceOptions trace() const {
    TraceOptions o;
    o.window_budget = static_cast<std::uint64_t>(window);
    return o;
  }
};

// ---------------------------------------------------------------- sim

struct SimArgs {
  std::string rule, init = "random", render = "text", out;
  int steps = 10;
  std::uint64_t seed = 0;
  std::size_t width = 64;
};

Word initial_word(const SimArgs& a, std::uint32_t n) {
  if (a.init.rfind("random", 0) == 0) {
    std::uint64_t seed = a.seed;
    if (a.init.size() > 6) {
      if (a.init[6] != ':') throw std::invalid_argument("--init expects a word or random:<seed>");
      seed = std::stoull(a.init.substr(7));
    }
    std::mt19937_64 rng(seed);
    Word w(a.width);
    for (auto& s : w) s = static_cast<State>(rng() % n);
    return w;
  }
  return parse_word(a.init, n);
}

int cmd_sim(const SimArgs& a, const Budgets& b, std::ostream& out) {
  const LocalRule r = load_rule_file(a.rule);
  const std::uint32_t n = r.alphabet().size();
  const Word init = initial_word(a, n);
  if (a.steps < 0) throw std::invalid_argument("--steps must be >= 0");
  const double cells = double(a.steps + 1) * double(init.size());
  if (cells > b.table) throw BudgetError("table", cells, b.table);

  std::vector<Word> rows{init};
  for (int t = 0; t < a.steps; ++t) {
    const Word& last = rows.back();
    rows.push_back(last.size() < static_cast<std::size_t>(r.width()) ? Word{} : apply_word(r, last));
  }
  // output cell j of a step sits at input position j - lo
  const int lo = r.neighborhood().lo;
  std::vector<long> shift(rows.size());
  long base = 0;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    shift[t] = -static_cast<long>(t) * lo;
    base = std::min(base, shift[t]);
  }
  std::size_t columns = 0;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    shift[t] -= base;
    columns = std::max(columns, static_cast<std::size_t>(shift[t]) + rows[t].size());
  }

  if (a.render == "pgm") {
    std::string img = "P5\n" + std::to_string(columns) + " " + std::to_string(rows.size()) + "\n255\n";
    for (std::size_t t = 0; t < rows.size(); ++t) {
      std::string line(columns, '\0');
      for (std::size_t j = 0; j < rows[t].size(); ++j) {
        const unsigned gray = n > 1 ? rows[t][j] * 255u / (n - 1) : 0u;
        line[static_cast<std::size_t>(shift[t]) + j] = static_cast<char>(gray);
      }
      img += line;
    }
    emit(a.out, img, out);
    return kOk;
  }
  if (a.render != "text") throw std::invalid_argument("--render must be text or pgm");
  std::size_t cw = 1;
  if (n > 36) cw = std::to_string(n - 1).size() + 1;
  std::ostringstream os;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    std::string line(static_cast<std::size_t>(shift[t]) * cw, ' ');
    for (State s : rows[t]) {
      std::string g = format_symbol(s, n);
      if (cw > 1) g.insert(0, cw - g.size(), ' ');
      line += g;
    }
    os << line << '\n';
  }
  emit(a.out, os.str(), out);
  return kOk;
}

// ---------------------------------------------------------------- decide

struct DecideArgs {
  std::string what, rule, out;
  int max_width = 2;
  long long q = 0, s = 0;
  long long nmax = -1;
  unsigned max_period = 12;
};

int cmd_decide(const DecideArgs& a, const Budgets& b, std::ostream& out) {
  const LocalRule r = load_rule_file(a.rule);
  const std::uint32_t n = r.alphabet().size();
  if (a.what == "inj") {
    const auto d = is_injective(r);
    if (d.verdict) {
      out << "injective\n";
      return kOk;
    }
    out << "not injective\n" << format_collision(*d.collision, n);
    return kRefuted;
  }
  if (a.what == "surj") {
    const auto d = is_surjective(r);
    if (d.verdict) {
      out << "surjective\n";
      return kOk;
    }
    out << "not surjective\norphan: " << format_word(*d.orphan, n) << '\n';
    return kRefuted;
  }
  if (a.what == "inverse") {
    const auto inv = inverse_rule(r, a.max_width);
    if (!inv) {
      out << "no inverse of width <= " << a.max_width << '\n';
      return kRefuted;
    }
    emit(a.out, format_rule(*inv), out);
    return kOk;
  }
  const unsigned nmax = static_cast<unsigned>(a.nmax < 0 ? default_nmax(r) : a.nmax);
  if (a.what == "nilpotent") {
    const auto idx = nilpotency_within(r, static_cast<State>(a.q), nmax, b.table_u());
    if (!idx) {
      out << "not nilpotent within " << nmax << " steps\n";
      return kRefuted;
    }
    out << "nilpotent index " << *idx << '\n';
    return kOk;
  }
  if (a.what == "periodic") {
    const auto p = periodicity_within(r, nmax, b.table_u());
    if (!p) {
      out << "no power repeats within " << nmax << " steps\n";
      return kRefuted;
    }
    out << "preperiod " << p->preperiod << " period " << p->period << '\n';
    return kOk;
  }
  if (a.what == "avoid") {
    const auto w = avoiding_configuration(r, static_cast<State>(a.s), a.max_period);
    if (!w) {
      out << "no avoiding configuration of period <= " << a.max_period << '\n';
      return kRefuted;
    }
    out << "avoiding: " << format_word(*w, n) << '\n';
    return kOk;
  }
  throw std::invalid_argument("unknown decision " + a.what);
}

// ---------------------------------------------------------------- trace

struct TraceArgs {
  std::string what, rule;
  int k = 1, L = 1;
};

int cmd_trace(const TraceArgs& a, const Budgets& b, std::ostream& out) {
  const LocalRule r = load_rule_file(a.rule);
  const std::uint32_t n = r.alphabet().size();
  if (a.what == "complexity") {
    out << subword_complexity(r, a.k, a.L, b.trace()) << '\n';
  } else if (a.what == "entropy") {
    out << format_entropy_tsv(entropy_upper(r, a.k, a.L, b.trace()));
  } else if (a.what == "words") {
    const auto t = trace_words(r, a.k, a.L, b.trace());
    for (auto code : t.codes()) {
      const Word w = t.decode(code);
      std::string line;
      for (int step = 0; step < a.L; ++step) {
        if (step && a.k > 1) line += '|';
        line += format_word(std::span<const State>(w).subspan(static_cast<std::size_t>(step * a.k),
                                                                static_cast<std::size_t>(a.k)),
                            n);
        if (n > 36 && step + 1 < a.L && a.k == 1) line += '.';
      }
      out << line << '\n';
    }
  } else {
    throw std::invalid_argument("unknown trace command " + a.what);
  }
  return kOk;
}

// ---------------------------------------------------------------- reduction

struct ReduceArgs {
  std::string H, out_F, out_G, out, n = "auto";
  long long q = 0;
  int k = 1;
};

struct VerifyArgs {
  std::string phi, F, G;
};

int cmd_reduce_build(const ReduceArgs& a, std::ostream& out, std::ostream& err) {
  const auto inst = build_instance(load_rule_file(a.H), static_cast<State>(a.q), a.k);
  for (const auto& w : inst.warnings) err << "warning: " << w << '\n';
  if (a.out_F.empty() && a.out_G.empty()) throw std::invalid_argument("give --out-F and/or --out-G");
  if (!a.out_F.empty()) save_text(a.out_F, format_rule(inst.calF));
  if (!a.out_G.empty()) save_text(a.out_G, format_rule(inst.calG));
  out << "alphabet " << inst.alphabet().size() << " (A=" << inst.A.size()
      << ", B=" << inst.H.alphabet().size() << ")\n";
  out << "q spreading: " << yes_no(inst.q_spreading) << '\n';
  return kOk;
}

int cmd_reduce_phi(const ReduceArgs& a, const Budgets& b, std::ostream& out, std::ostream& err) {
  const auto inst = build_instance(load_rule_file(a.H), static_cast<State>(a.q), a.k);
  for (const auto& w : inst.warnings) err << "warning: " << w << '\n';
  unsigned n = 0;
  if (a.n == "auto") {
    const auto nmax = static_cast<unsigned>(default_nmax(inst.H));
    const auto idx = nilpotency_within(inst.H, inst.q, nmax, b.table_u());
    if (!idx) {
      out << "H is not nilpotent within " << nmax << " steps; no phi\n";
      return kRefuted;
    }
    n = *idx;
  } else {
    n = static_cast<unsigned>(std::stoul(a.n));
  }
  const BlockMap phi = build_phi(inst, n);
  err << "phi: n = " << n << ", width " << phi.width() << '\n';
  emit(a.out, format_map(phi), out);
  return kOk;
}

int report_certificate(const ConjugacyCertificate& c, std::uint32_t n_src, std::uint32_t n_tgt,
                       std::ostream& out) {
  out << (c.valid() ? "VALID" : "REFUTED") << '\n';
  out << "homomorphism: " << yes_no(c.homomorphism) << '\n';
  if (c.residue) {
    out << "differs at window " << format_word(c.residue->window, n_src)
        << ": phi F -> " << format_symbol(c.residue->left, n_tgt)
        << ", G phi -> " << format_symbol(c.residue->right, n_tgt) << '\n';
  }
  out << "injective: " << yes_no(c.injective) << '\n';
  if (c.collision) out << format_collision(*c.collision, n_src);
  out << "surjective: " << yes_no(c.surjective) << '\n';
  if (c.orphan) out << "orphan: " << format_word(*c.orphan, n_tgt) << '\n';
  return c.valid() ? kOk : kRefuted;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  BlockMap phi = [&] {
    try {
      return load_map(a.phi);
    } catch (const ParseError& e) {
      throw ParseError(0, a.phi + ": " + e.what());
    }
  }();
  const LocalRule F = load_rule_file(a.F), G = load_rule_file(a.G);
  return report_certificate(verify_certificate(phi, F, G), phi.source().size(),
                            phi.target().size(), out);
}

struct SearchArgs {
  std::string F, G, out;
  int max_width = 1;
  int L_max = 6;
  std::uint64_t nodes = kDefaultSearchBudget;
};

int cmd_search(const SearchArgs& a, std::ostream& out) {
  const LocalRule F = load_rule_file(a.F), G = load_rule_file(a.G);
  if (const auto ob = trace_count_obstruction(F, G, a.max_width, a.L_max)) {
    out << "obstruction: L=" << ob->L << ", "
        << (ob->forward ? "p_L(tau_1(G)) = " : "p_L(tau_1(F)) = ") << ob->narrow << " > "
        << (ob->forward ? "p_L(tau_" : "p_L(tau_") << ob->width << (ob->forward ? "(F)) = " : "(G)) = ")
        << ob->wide << '\n';
  }
  const auto cert = search_strong_conjugacy(F, G, a.max_width, a.nodes);
  if (!cert) {
    out << "no strong conjugacy of width <= " << a.max_width << '\n';
    return kRefuted;
  }
  out << "found width " << cert->phi.width() << '\n';
  emit(a.out, format_map(cert->phi), out);
  return kOk;
}

// ---------------------------------------------------------------- sft

struct SftArgs {
  std::string what, convention = "columns", rule;
  std::vector<std::string> files;
  int k = 1, L = 2;
};

AmalgamationConvention convention(const std::string& s) {
  if (s == "columns") return AmalgamationConvention::IncomingColumns;
  if (s == "rows") return AmalgamationConvention::OutgoingRows;
  throw std::invalid_argument("--convention must be columns or rows");
}

SftPresentation load_matrix(const std::string& path) {
  try {
    return sft_from_matrix(parse_matrix(read_text(path)));
  } catch (const ParseError& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

int cmd_sft(const SftArgs& a, std::ostream& out) {
  const auto conv = convention(a.convention);
  auto need = [&](std::size_t count) {
    if (a.files.size() != count)
      throw std::invalid_argument("sft " + a.what + " expects " + std::to_string(count) + " matrix file(s)");
  };
  auto need_rule = [&] {
    if (a.rule.empty()) throw std::invalid_argument("sft " + a.what + " needs --rule");
    return load_rule_file(a.rule);
  };
  if (a.what == "amalgamate") {
    need(1);
    const auto [res, trace] = total_amalgamation(load_matrix(a.files[0]), conv);
    out << "merges:";
    for (auto [i, j] : trace.merges) out << ' ' << i << ',' << j;
    out << '\n' << format_matrix(res.adjacency);
    return kOk;
  }
  if (a.what == "conjugate") {
    need(2);
    const bool c = one_sided_conjugate(load_matrix(a.files[0]), load_matrix(a.files[1]), conv);
    out << (c ? "conjugate" : "not conjugate") << '\n';
    return c ? kOk : kRefuted;
  }
  if (a.what == "graph") {
    const auto s = graph_subshift(need_rule());
    out << format_matrix(s.adjacency);
    return kOk;
  }
  if (a.what == "trace-approx") {
    const auto ap = trace_sft_approx(need_rule(), a.k, a.L);
    out << "exact: " << yes_no(ap.exact) << '\n' << format_matrix(ap.sft.adjacency);
    return kOk;
  }
  throw std::invalid_argument("unknown sft command " + a.what);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cellular automata: rules, decisions, traces, reductions, SFT conjugacy", "cadyn"};
  app.require_subcommand(1);
  Budgets budgets;
  app.add_option("--max-table", budgets.table, "largest rule table or simulation grid")
      ->capture_default_str();
  app.add_option("--max-window", budgets.window, "largest trace window enumeration")
      ->capture_default_str();
  std::function<int()> action;

  // rule
  auto* rule = app.add_subcommand("rule", "inspect or generate rule files");
  rule->require_subcommand(1);
  std::string rule_file, rule_out;
  int gen_k = 1;
  auto* rcheck = rule->add_subcommand("check", "validate a rule file");
  rcheck->add_option("file", rule_file)->required();
  rcheck->callback([&] {
    action = [&] {
      const LocalRule r = load_rule_file(rule_file);
      out << "ok: sides " << to_string(r.sides()) << ", states " << r.alphabet().size()
          << ", neighborhood " << r.neighborhood().lo << ' ' << r.neighborhood().hi << '\n';
      return kOk;
    };
  });
  auto* rshow = rule->add_subcommand("show", "print the canonical form");
  rshow->add_option("file", rule_file)->required();
  rshow->callback([&] {
    action = [&] {
      out << format_rule(load_rule_file(rule_file));
      return kOk;
    };
  });
  struct Gen {
    const char* name;
    const char* help;
    std::function<LocalRule()> make;
  };
  const std::vector<Gen> gens{
      {"gen-example021", "the reversible 3-state rule", example_021_rule},
      {"gen-and", "b0 b1 -> b0*b1 over {0,1}", and_rule},
      {"gen-chain", "nilpotent 3-state chain rule", chain_rule},
      {"gen-product", "2k-fold product of the 3-state rule",
       [&] { return product_power(gen_k, budgets.table_u()); }}};
  for (const auto& g : gens) {
    auto* sub = rule->add_subcommand(g.name, g.help);
    sub->add_option("--out,-o", rule_out, "output file (default stdout)");
    if (std::string(g.name) == "gen-product") sub->add_option("-k", gen_k, "k")->required();
    sub->callback([&, make = g.make] {
      action = [&, make] {
        emit(rule_out, format_rule(make()), out);
        return kOk;
      };
    });
  }

  // sim
  SimArgs sim_args;
  auto* sim = app.add_subcommand("sim", "render a space-time diagram");
  sim->add_option("rule", sim_args.rule)->required();
  sim->add_option("--steps,-T", sim_args.steps)->capture_default_str();
  sim->add_option("--init", sim_args.init, "word, random or random:<seed>")->capture_default_str();
  sim->add_option("--seed", sim_args.seed)->capture_default_str();
  sim->add_option("--width", sim_args.width, "length of a random initial word")->capture_default_str();
  sim->add_option("--render", sim_args.render)->check(CLI::IsMember({"text", "pgm"}))->capture_default_str();
  sim->add_option("--out,-o", sim_args.out);
  sim->callback([&] { action = [&] { return cmd_sim(sim_args, budgets, out); }; });

  // decide
  DecideArgs dec;
  auto* decide = app.add_subcommand("decide", "decision procedures");
  decide->require_subcommand(1);
  for (const char* what : {"inj", "surj", "inverse", "nilpotent", "periodic", "avoid"}) {
    auto* sub = decide->add_subcommand(what);
    sub->add_option("rule", dec.rule)->required();
    const std::string w = what;
    if (w == "inverse") {
      sub->add_option("--max-width", dec.max_width)->capture_default_str();
      sub->add_option("--out,-o", dec.out);
    }
    if (w == "nilpotent") sub->add_option("--q", dec.q)->capture_default_str();
    if (w == "nilpotent" || w == "periodic")
      sub->add_option("--nmax", dec.nmax, "step budget (default |A|^width)");
    if (w == "avoid") {
      sub->add_option("--s", dec.s)->required();
      sub->add_option("--max-period", dec.max_period)->capture_default_str();
    }
    sub->callback([&, w] {
      dec.what = w;
      action = [&] { return cmd_decide(dec, budgets, out); };
    });
  }

  // trace
  TraceArgs tr;
  auto* trace = app.add_subcommand("trace", "trace subshift words and entropy bounds");
  trace->require_subcommand(1);
  for (const char* what : {"words", "complexity", "entropy"}) {
    auto* sub = trace->add_subcommand(what);
    sub->add_option("rule", tr.rule)->required();
    sub->add_option("-k", tr.k)->capture_default_str();
    sub->add_option("-L", tr.L, std::string(what) == "entropy" ? "largest depth" : "depth")
        ->capture_default_str();
    const std::string w = what;
    sub->callback([&, w] {
      tr.what = w;
      action = [&] { return cmd_trace(tr, budgets, out); };
    });
  }

  // reduce
  ReduceArgs red;
  VerifyArgs ver;
  auto* reduce = app.add_subcommand("reduce", "nilpotency-to-conjugacy construction");
  reduce->require_subcommand(1);
  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--H", red.H)->required();
    sub->add_option("--q", red.q)->capture_default_str();
    sub->add_option("--k", red.k)->capture_default_str();
  };
  auto* rbuild = reduce->add_subcommand("build", "write F and G");
  add_instance(rbuild);
  rbuild->add_option("--out-F", red.out_F);
  rbuild->add_option("--out-G", red.out_G);
  rbuild->callback([&] { action = [&] { return cmd_reduce_build(red, out, err); }; });
  auto* rphi = reduce->add_subcommand("phi", "build the conjugacy for nilpotent H");
  add_instance(rphi);
  rphi->add_option("--n", red.n, "nilpotency index or auto")->capture_default_str();
  rphi->add_option("--out,-o", red.out);
  rphi->callback([&] { action = [&] { return cmd_reduce_phi(red, budgets, out, err); }; });
  auto add_verify = [&](CLI::App* sub) {
    sub->add_option("--phi", ver.phi)->required();
    sub->add_option("--F", ver.F)->required();
    sub->add_option("--G", ver.G)->required();
    sub->callback([&] { action = [&] { return cmd_verify(ver, out); }; });
  };
  add_verify(reduce->add_subcommand("verify", "check a conjugacy certificate"));
  auto* verify = app.add_subcommand("verify", "certificate checks");
  verify->require_subcommand(1);
  add_verify(verify->add_subcommand("conj", "check phi F = G phi and bijectivity"));

  // search
  SearchArgs sr;
  auto* search = app.add_subcommand("search", "bounded conjugacy search");
  search->require_subcommand(1);
  auto* sconj = search->add_subcommand("conj", "least strong conjugacy by width");
  sconj->add_option("--F", sr.F)->required();
  sconj->add_option("--G", sr.G)->required();
  sconj->add_option("--max-width", sr.max_width)->capture_default_str();
  sconj->add_option("--L-max", sr.L_max, "depth for the trace-count pre-check")->capture_default_str();
  sconj->add_option("--max-nodes", sr.nodes)->capture_default_str();
  sconj->add_option("--out,-o", sr.out);
  sconj->callback([&] { action = [&] { return cmd_search(sr, out); }; });

  // sft
  SftArgs sf;
  auto* sft = app.add_subcommand("sft", "one-sided SFT conjugacy");
  sft->require_subcommand(1);
  for (const char* what : {"amalgamate", "conjugate", "graph", "trace-approx"}) {
    auto* sub = sft->add_subcommand(what);
    const std::string w = what;
    if (w == "amalgamate" || w == "conjugate") sub->add_option("files", sf.files)->required();
    if (w == "graph" || w == "trace-approx") sub->add_option("--rule", sf.rule)->required();
    if (w == "trace-approx") {
      sub->add_option("-k", sf.k)->capture_default_str();
      sub->add_option("-L", sf.L)->capture_default_str();
    }
    sub->add_option("--convention", sf.convention)
        ->check(CLI::IsMember({"columns", "rows"}))
        ->capture_default_str();
    sub->callback([&, w] {
      sf.what = w;
      action = [&] { return cmd_sft(sf, out); };
    });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return action();
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace cadyn::cli
