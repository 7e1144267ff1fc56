#include "hroots/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "hroots/error.hpp"
#include "hroots/hankel.hpp"
#include "hroots/oracle.hpp"
#include "json.hpp"

namespace hroots::cli {

using nlohmann::ordered_json;

namespace {

std::string fmt_double(double x, bool exact) {
  if (x == 0.0) x = 0.0;  // no negative zeros in output
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = exact ? std::to_chars(buf, buf + sizeof buf, x, std::chars_format::hex)
                         : std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  if (exact) s = (s[0] == '-' ? "-0x" + s.substr(1) : "0x" + s);
  return s;
}

// Numbers in JSON output: plain doubles, or hex strings in exact mode.
ordered_json jnum(double x, bool exact) {
  if (x == 0.0) x = 0.0;
  if (exact) return fmt_double(x, true);
  if (!std::isfinite(x)) return nullptr;
  return x;
}

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  [[nodiscard]] std::pair<int, int> line_col(std::size_t at) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }
};

[[noreturn]] void parse_fail(const Cursor& c, std::size_t at, const std::string& what) {
  const auto [line, col] = c.line_col(at);
  throw Error(ErrorCode::ParseError, "cli.parse_input",
              "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
}

mp::Real parse_real(const Cursor& c, std::size_t at, const std::string& token, mp::Bits bits) {
  try {
    mp::Real v = mp::Real::parse(token, bits);
    if (!v.is_finite()) parse_fail(c, at, "non-finite coefficient '" + token + "'");
    return v;
  } catch (const std::invalid_argument&) {
    parse_fail(c, at, "not a number: '" + token + "'");
  }
}

Polynomial parse_json(std::string_view text, mp::Bits bits) {
  const Cursor cur{text};
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    parse_fail(cur, e.byte > 0 ? e.byte - 1 : 0, "malformed JSON");
  }
  if (!doc.is_object() || !doc.contains("coefficients") || !doc["coefficients"].is_array()) {
    parse_fail(cur, 0, "expected an object with a \"coefficients\" array");
  }
  auto component = [&](const ordered_json& v, std::size_t i) {
    if (v.is_number()) return mp::Real(v.get<double>(), bits);
    if (v.is_string()) return parse_real(cur, 0, v.get<std::string>(), bits);
    parse_fail(cur, 0, "coefficient " + std::to_string(i) + ": expected a number");
  };
  std::vector<mp::Complex> coeffs;
  std::size_t i = 0;
  for (const auto& c : doc["coefficients"]) {
    if (c.is_array() && c.size() == 2) {
      coeffs.emplace_back(component(c[0], i), component(c[1], i));
    } else if (c.is_number() || c.is_string()) {
      coeffs.emplace_back(component(c, i));
    } else {
      parse_fail(cur, 0, "coefficient " + std::to_string(i) + ": expected [re, im]");
    }
    ++i;
  }
  return make_polynomial(std::move(coeffs));
}

Polynomial parse_plain(std::string_view text, mp::Bits bits) {
  const Cursor cur{text};
  std::vector<mp::Complex> coeffs;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
      ++i;
      continue;
    }
    if (ch == '#') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != ',') ++i;
    coeffs.emplace_back(parse_real(cur, start, std::string(text.substr(start, i - start)), bits));
  }
  return make_polynomial(std::move(coeffs));
}

void emit_error(std::ostream& err, const Error& e) {
  ordered_json j;
  j["error"]["code"] = std::string(to_string(e.code()));
  j["error"]["stage"] = e.stage();
  j["error"]["message"] = e.what();
  if (e.index()) j["error"]["k"] = *e.index();
  err << j.dump() << '\n';
}

void emit_usage_error(std::ostream& err, const std::string& message) {
  ordered_json j;
  j["error"]["code"] = "Usage";
  j["error"]["stage"] = "cli";
  j["error"]["message"] = message;
  err << j.dump() << '\n';
}

// ---- commands ----

void cmd_roots(const JobSpec& job, const Polynomial& p, std::ostream& out) {
  const RootSet set = solve(p, job.config);
  if (job.format == Format::Csv) {
    out << "re,im,multiplicity,residual\n";
    for (const auto& e : set.entries) {
      const auto z = e.root.to_std();
      out << fmt_double(z.real(), job.exact) << ',' << fmt_double(z.imag(), job.exact) << ',' << e.multiplicity
          << ',' << fmt_double(e.residual, job.exact) << '\n';
    }
    return;
  }
  ordered_json j;
  j["roots"] = ordered_json::array();
  for (const auto& e : set.entries) {
    const auto z = e.root.to_std();
    j["roots"].push_back({{"re", jnum(z.real(), job.exact)},
                          {"im", jnum(z.imag(), job.exact)},
                          {"multiplicity", e.multiplicity},
                          {"residual", jnum(e.residual, job.exact)}});
  }
  j["zero_multiplicity"] = set.zero_multiplicity;
  j["distinct_count"] = set.distinct_count();
  j["shifts_used"] = set.shifts_used;
  out << j.dump() << '\n';
}

void cmd_trace(const JobSpec& job, const Polynomial& p, std::ostream& out, std::ostream& err) {
  const RatioTrace t = adaptive_trace(p, job.side, job.r, 0, job.config.k_max, job.config, false);
  // Rows in k order; gaps carry inf (pole) or nan (both determinants zero).
  std::size_t pi = 0, gi = 0;
  out << "k,re,im,diff\n";
  while (pi < t.points.size() || gi < t.gaps.size()) {
    if (gi < t.gaps.size() && (pi == t.points.size() || t.gaps[gi].k < t.points[pi].k)) {
      const char* v = t.gaps[gi].kind == GapKind::Pole ? "inf" : "nan";
      out << t.gaps[gi].k << ',' << v << ',' << v << ",\n";
      ++gi;
      continue;
    }
    const auto z = t.points[pi].ratio.to_std();
    out << t.points[pi].k << ',' << fmt_double(z.real(), job.exact) << ',' << fmt_double(z.imag(), job.exact) << ',';
    if (pi < t.diffs.size()) out << fmt_double(t.diffs[pi], job.exact);
    out << '\n';
    ++pi;
  }
  ordered_json diag;
  diag["k_last"] = t.k_last;
  diag["precision"] = t.precision;
  diag["truncated"] = t.truncated;
  try {
    const TraceVerdict v = classify(t, job.config);
    diag["verdict"] = to_string(v.status);
    const auto lim = v.limit.to_std();
    diag["limit"] = {jnum(lim.real(), job.exact), jnum(lim.imag(), job.exact)};
    diag["q_estimate"] = jnum(v.q_estimate, job.exact);
    diag["error_estimate"] = jnum(v.error_estimate, job.exact);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooFewPoints) throw;
    diag["verdict"] = "too_few_points";
  }
  err << diag.dump() << '\n';
}

void cmd_series(const JobSpec& job, const Polynomial& p, std::ostream& out) {
  const auto n = static_cast<std::size_t>(job.count);
  const auto values = job.side == Side::Taylor ? taylor_coeffs(p, n) : laurent_coeffs(p, n);
  if (job.format == Format::Json) {
    ordered_json j = ordered_json::array();
    for (std::size_t k = 0; k < values.size(); ++k) {
      const auto z = values[k].to_std();
      j.push_back({{"k", k}, {"re", jnum(z.real(), job.exact)}, {"im", jnum(z.imag(), job.exact)}});
    }
    out << j.dump() << '\n';
    return;
  }
  out << "k,re,im\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto z = values[k].to_std();
    out << k << ',' << fmt_double(z.real(), job.exact) << ',' << fmt_double(z.imag(), job.exact) << '\n';
  }
}

void cmd_dets(const JobSpec& job, const Polynomial& p, std::ostream& out) {
  CoefficientStream stream(p.with_precision(std::max<mp::Bits>(job.config.precision_bits, p.precision())), job.side);
  const auto cells = det_row(stream, 0, job.config.k_max, job.r, job.config.guard_bits);
  if (job.format == Format::Json) {
    ordered_json j = ordered_json::array();
    for (const auto& c : cells) {
      const auto m = c.value.mantissa().to_std();
      j.push_back({{"k", c.k},
                   {"re_mantissa", jnum(m.real(), job.exact)},
                   {"im_mantissa", jnum(m.imag(), job.exact)},
                   {"exp2", c.value.exponent()},
                   {"cancellation_bits", jnum(c.cancellation_margin, job.exact)},
                   {"flagged", c.flagged}});
    }
    out << j.dump() << '\n';
    return;
  }
  out << "k,re_mantissa,im_mantissa,exp2,cancellation_bits\n";
  for (const auto& c : cells) {
    const auto m = c.value.mantissa().to_std();
    out << c.k << ',' << fmt_double(m.real(), job.exact) << ',' << fmt_double(m.imag(), job.exact) << ','
        << c.value.exponent() << ',' << fmt_double(c.cancellation_margin, job.exact) << '\n';
  }
}

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

double rel_diff(const mp::Complex& a, const mp::Complex& b) {
  const double scale = std::max(mp::abs(a).to_double(), mp::abs(b).to_double());
  const double d = mp::distance(a, b).to_double();
  return scale > 0.0 ? d / scale : d;
}

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

// Cross-checks of the pipeline against the oracle on one polynomial.
std::vector<Check> verify_checks(const JobSpec& job, const Polynomial& p) {
  std::vector<Check> checks;
  const SolverConfig& cfg = job.config;
  const Polynomial work = p.with_precision(std::max<mp::Bits>(cfg.precision_bits, p.precision()));

  // Independent roots first; everything else is compared against them.
  oracle::DurandKernerOptions dk;
  dk.seed = cfg.shift_seed ^ 0x5eedULL;
  const auto approx = oracle::independent_roots(work, dk);
  const auto clusters = oracle::cluster_roots(approx);

  RootSet set;
  try {
    set = solve(work, cfg);
    checks.push_back({"solve", true, std::to_string(set.distinct_count()) + " distinct roots"});
  } catch (const Error& e) {
    checks.push_back({"solve", false, e.what()});
  }

  if (!set.entries.empty() || set.zero_multiplicity > 0) {
    std::vector<mp::Complex> mine;
    for (int i = 0; i < set.zero_multiplicity; ++i) mine.emplace_back(work.precision());
    for (const auto& e : set.entries) {
      for (int i = 0; i < e.multiplicity; ++i) mine.push_back(e.root);
    }
    double worst = 0.0;
    bool ok = mine.size() == approx.size();
    std::vector<bool> used(approx.size(), false);
    for (const auto& z : mine) {
      if (!ok) break;
      std::size_t best = approx.size();
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < approx.size(); ++j) {
        if (used[j]) continue;
        const double d = mp::distance(z, approx[j]).to_double();
        if (d < bd) {
          bd = d;
          best = j;
        }
      }
      used[best] = true;
      worst = std::max(worst, bd / std::max(1.0, mp::abs(z).to_double()));
    }
    checks.push_back({"oracle_agreement", ok && worst < 1e-8, "max deviation " + sci(worst)});
    double res = 0.0;
    for (const auto& e : set.entries) res = std::max(res, e.residual);
    checks.push_back({"residuals", res < cfg.residual_tol, "max residual " + sci(res)});
    checks.push_back({"multiplicity_sum", set.total_multiplicity() + set.zero_multiplicity == p.degree(),
                      std::to_string(set.total_multiplicity() + set.zero_multiplicity) + " of " +
                          std::to_string(p.degree())});
  }

  // Series and determinants against closed forms in the roots.
  const Polynomial q = strip_zero_roots(work).reduced;
  std::vector<mp::Complex> roots;
  std::vector<int> mults;
  for (const auto& c : clusters) {
    if (c.root.is_zero() || mp::abs(c.root).to_double() < 1e-30) continue;
    roots.push_back(c.root);
    mults.push_back(c.multiplicity);
  }
  if (q.degree() >= 1 && !roots.empty()) {
    const std::size_t K = 12;
    double worst_t = 0.0, worst_l = 0.0;
    const auto ct = taylor_coeffs(q, K), ot = oracle::taylor_from_roots(roots, mults, K);
    const auto cl = laurent_coeffs(q, K), ol = oracle::laurent_from_roots(roots, mults, K);
    for (std::size_t k = 0; k < K; ++k) {
      worst_t = std::max(worst_t, rel_diff(ct[k], ot[k]));
      worst_l = std::max(worst_l, rel_diff(cl[k], ol[k]));
    }
    checks.push_back({"taylor_series", worst_t < 1e-8, "max relative deviation " + sci(worst_t)});
    checks.push_back({"laurent_series", worst_l < 1e-8, "max relative deviation " + sci(worst_l)});

    const int pcount = static_cast<int>(roots.size());
    double worst_h = 0.0;
    for (Side side : {Side::Taylor, Side::Laurent}) {
      CoefficientStream stream(q, side);
      for (int r = 1; r <= pcount; ++r) {
        for (long k = 0; k < 6; ++k) {
          const auto cell = hadamard_det(stream, k, r, cfg.guard_bits);
          const auto closed = oracle::hadamard_via_roots(roots, mults, k, r, side);
          worst_h = std::max(worst_h, rel_diff(cell.value.value(), closed));
        }
      }
    }
    checks.push_back({"closed_form_determinants", worst_h < 1e-8, "max relative deviation " + sci(worst_h)});

    mp::Complex prod = mp::Complex::from_int(1, q.precision());
    for (const auto& z : roots) prod *= z;
    double worst_top = 0.0;
    for (Side side : {Side::Taylor, Side::Laurent}) {
      const RatioTrace t = ratio_trace(q.with_precision(std::max<mp::Bits>(q.precision(), 512)), side, pcount, 6,
                                       {0, cfg.guard_bits, 0});
      for (const auto& pt : t.points) worst_top = std::max(worst_top, rel_diff(pt.ratio, prod));
      if (t.points.empty()) worst_top = std::numeric_limits<double>::infinity();
    }
    checks.push_back({"exact_top_ratio", worst_top < 1e-8, "max relative deviation " + sci(worst_top)});

    const auto vd = oracle::vandermonde(roots);
    const auto vi = oracle::vandermonde_inversed(roots);
    const long s = static_cast<long>(roots.size());
    const mp::Complex expected = (s * (s - 1) / 2) % 2 == 0 ? vd : -vd;
    const double dv = rel_diff(vi, expected);
    checks.push_back({"vandermonde", dv < 1e-20, "relative deviation " + sci(dv)});
  }
  return checks;
}

int cmd_verify(const JobSpec& job, const Polynomial& p, std::ostream& out) {
  const auto checks = verify_checks(job, p);
  const bool all = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  if (job.format == Format::Csv) {
    out << "check,pass,detail\n";
    for (const auto& c : checks) out << c.name << ',' << (c.pass ? "pass" : "fail") << ',' << c.detail << '\n';
  } else {
    ordered_json j;
    j["checks"] = ordered_json::array();
    for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["pass"] = all;
    out << j.dump() << '\n';
  }
  return all ? 0 : 2;
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Roots: return "roots";
    case Command::Trace: return "trace";
    case Command::Series: return "series";
    case Command::Dets: return "dets";
    case Command::Verify: return "verify";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view s) {
  for (Command c : {Command::Roots, Command::Trace, Command::Series, Command::Dets, Command::Verify}) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

std::optional<Format> parse_format(std::string_view s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  return std::nullopt;
}

std::optional<Side> parse_side(std::string_view s) {
  if (s == "taylor") return Side::Taylor;
  if (s == "laurent") return Side::Laurent;
  return std::nullopt;
}

Polynomial parse_input(std::string_view text, mp::Bits bits) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    throw Error(ErrorCode::EmptyInput, "cli.parse_input", "no coefficients given");
  }
  return text[first] == '{' ? parse_json(text, bits) : parse_plain(text, bits);
}

int run(const JobSpec& job, std::ostream& out, std::ostream& err) {
  try {
    job.config.validate();
    if (job.r < 1) throw Error(ErrorCode::InvalidConfig, "cli", "--r must be >= 1");
    if (job.count < 1) throw Error(ErrorCode::InvalidConfig, "cli", "--count must be >= 1");
    const Polynomial p = parse_input(job.input, static_cast<mp::Bits>(job.config.precision_bits));
    if (job.command != Command::Roots && job.command != Command::Verify && p.degree() < 1) {
      throw Error(ErrorCode::DegreeZero, "cli", "polynomial has degree 0");
    }
    if ((job.command == Command::Trace || job.command == Command::Dets) && job.r > p.degree()) {
      throw Error(ErrorCode::RGreaterThanP, "cli",
                  "--r " + std::to_string(job.r) + " exceeds degree " + std::to_string(p.degree()));
    }
    switch (job.command) {
      case Command::Roots: cmd_roots(job, p, out); break;
      case Command::Trace: cmd_trace(job, p, out, err); break;
      case Command::Series: cmd_series(job, p, out); break;
      case Command::Dets: cmd_dets(job, p, out); break;
      case Command::Verify: return cmd_verify(job, p, out);
    }
    return 0;
  } catch (const Error& e) {
    emit_error(err, e);
    return is_numerical(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    emit_usage_error(err, e.what());
    return 1;
  }
}

RatioTrace trace_from_csv(std::string_view csv, Side side, int r, mp::Bits bits) {
  RatioTrace t;
  t.side = side;
  t.r = r;
  t.precision = bits;
  std::istringstream in{std::string(csv)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("k,", 0) == 0) continue;
    }
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() < 3) throw Error(ErrorCode::ParseError, "cli.trace_from_csv", "short row: " + line);
    const long k = std::stol(f[0]);
    if (t.points.empty() && t.gaps.empty()) t.k_min = k;
    t.k_last = k;
    if (f[1] == "inf" || f[1] == "nan") {
      t.gaps.push_back({k, f[1] == "inf" ? GapKind::Pole : GapKind::Indeterminate});
      continue;
    }
    mp::Complex z(mp::Real::parse(f[1], bits), mp::Real::parse(f[2], bits));
    if (!t.points.empty()) t.diffs.push_back(mp::distance(z, t.points.back().ratio).to_double());
    t.points.push_back({k, std::move(z)});
  }
  return t;
}

}  // namespace hroots::cli
