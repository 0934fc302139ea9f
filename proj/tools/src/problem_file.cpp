#include "monosplit/tools/problem_file.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace monosplit::tools {

namespace {

const std::set<std::string> kConfigKeys = {"epsilon", "gamma",   "max_iters", "tol",
                                           "error_eta", "error_p", "seed"};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s, int line, const std::string& field) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError(line, "field '" + field + "': cannot read number '" + s + "'");
  return v;
}

std::size_t parse_index(const std::string& s, int line, const std::string& field) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "field '" + field + "': expected a nonnegative integer, got '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s, int line, const std::string& field) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find_first_of(",;", start);
    if (end == std::string::npos) end = s.size();
    out.push_back(parse_double(s.substr(start, end - start), line, field));
    start = end + 1;
  }
  return out;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j) out += ',';
    out += format_double(v[j]);
  }
  return out;
}

std::string format_vector(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += ' ' + format_double(x);
  return out;
}

const OpEntry* find_op(const ProblemFile& pf, const std::string& role, std::size_t index) {
  for (const auto& op : pf.ops)
    if (op.role == role && op.index == index) return &op;
  return nullptr;
}

template <class F>
auto with_line(int line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

void require_slot(const OpEntry& op, SlotKind kind, const char* what) {
  if (!catalog_has(op.spec.id, kind) &&
      !(kind == SlotKind::Monotone && catalog_has(op.spec.id, SlotKind::Function)))
    throw ParseError(op.line, "unknown catalog id '" + op.spec.id + "' for " + what + " '" +
                                  op.role + "'");
}

MaximalMonotoneOp monotone_or(const ProblemFile& pf, const std::string& role, std::size_t idx,
                              int dim, bool required) {
  if (const OpEntry* op = find_op(pf, role, idx)) {
    require_slot(*op, SlotKind::Monotone, "operator");
    return with_line(op->line, [&] { return make_operator(op->spec, dim); });
  }
  if (required) throw ParseError(0, "missing entry: op " + role + " " + std::to_string(idx));
  return catalog::zero_op(dim);
}

LipschitzOp lipschitz_or(const ProblemFile& pf, const std::string& role, std::size_t idx, int dim,
                         bool required) {
  if (const OpEntry* op = find_op(pf, role, idx)) {
    require_slot(*op, SlotKind::Lipschitz, "Lipschitz operator");
    return with_line(op->line, [&] { return make_lipschitz(op->spec, dim); });
  }
  if (required) throw ParseError(0, "missing entry: op " + role + " " + std::to_string(idx));
  return LipschitzOp::zero(dim);
}

ConvexFn function_or(const ProblemFile& pf, const std::string& role, std::size_t idx, int dim,
                     const CatalogSpec* fallback) {
  if (const OpEntry* op = find_op(pf, role, idx)) {
    require_slot(*op, SlotKind::Function, "function");
    return with_line(op->line, [&] { return make_function(op->spec, dim); });
  }
  if (!fallback) throw ParseError(0, "missing entry: op " + role + " " + std::to_string(idx));
  return make_function(*fallback, dim);
}

Vector vec_or_zero(const ProblemFile& pf, const std::string& role, std::size_t idx, int dim) {
  for (const auto& v : pf.vecs)
    if (v.role == role && v.index == idx) {
      if (static_cast<int>(v.values.size()) != dim)
        throw ParseError(0, "vec " + role + " " + std::to_string(idx) + " needs " +
                                std::to_string(dim) + " entries");
      return Eigen::Map<const Vector>(v.values.data(), dim);
    }
  return Vector::Zero(dim);
}

const LinearEntry* find_linop(const ProblemFile& pf, std::size_t k, std::size_t i) {
  for (const auto& l : pf.linops)
    if (l.k == k && l.i == i) return &l.entry;
  return nullptr;
}

BlockLinearOp grid(const ProblemFile& pf) {
  std::vector<LinearEntry> entries;
  for (std::size_t k = 0; k < pf.sig.K(); ++k)
    for (std::size_t i = 0; i < pf.sig.m(); ++i) {
      const LinearEntry* e = find_linop(pf, k, i);
      entries.push_back(e ? *e : LinearEntry::zero(pf.sig.dual[k], pf.sig.primal[i]));
    }
  return BlockLinearOp(pf.sig, std::move(entries));
}

BlockVector block_vec(const ProblemFile& pf, const std::string& role, const std::vector<int>& dims) {
  std::vector<Vector> out;
  for (std::size_t j = 0; j < dims.size(); ++j) out.push_back(vec_or_zero(pf, role, j, dims[j]));
  return BlockVector(std::move(out));
}

void require_single_primal(const ProblemFile& pf) {
  if (pf.sig.m() != 1) throw ParseError(0, "kind '" + pf.kind + "' needs exactly one primal block");
}

std::vector<LinearEntry> column_maps(const ProblemFile& pf, bool identity_default) {
  std::vector<LinearEntry> out;
  const int n = pf.sig.primal[0];
  for (std::size_t k = 0; k < pf.sig.K(); ++k) {
    if (const LinearEntry* e = find_linop(pf, k, 0)) out.push_back(*e);
    else if (identity_default && pf.sig.dual[k] == n) out.push_back(LinearEntry::identity(n));
    else if (identity_default) throw ParseError(0, "missing linop " + std::to_string(k) + " 0");
    else out.push_back(LinearEntry::zero(pf.sig.dual[k], n));
  }
  return out;
}

}  // namespace

const std::vector<std::string>& problem_kinds() {
  static const std::vector<std::string> kinds = {"system",       "parallel_sum", "common_zero",
                                                 "multivar_min", "univar_min",   "feasibility"};
  return kinds;
}

ProblemFile parse_problem(std::istream& in) {
  ProblemFile pf;
  std::string raw;
  int line = 0;
  bool have_primal = false, have_dual = false;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto tok = split_ws(raw);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    if (key == "kind") {
      if (tok.size() != 2) throw ParseError(line, "kind takes one value");
      const auto& kinds = problem_kinds();
      if (std::find(kinds.begin(), kinds.end(), tok[1]) == kinds.end())
        throw ParseError(line, "unknown problem kind '" + tok[1] + "'");
      pf.kind = tok[1];
    } else if (key == "primal" || key == "dual") {
      std::vector<int> dims;
      for (std::size_t j = 1; j < tok.size(); ++j) {
        const auto d = parse_index(tok[j], line, key);
        if (d < 1) throw ParseError(line, "field '" + key + "': dimensions must be positive");
        dims.push_back(static_cast<int>(d));
      }
      if (dims.empty()) throw ParseError(line, key + " needs at least one dimension");
      (key == "primal" ? pf.sig.primal : pf.sig.dual) = dims;
      (key == "primal" ? have_primal : have_dual) = true;
    } else if (key == "partition") {
      if (tok.size() != 3) throw ParseError(line, "partition takes K1 K2");
      pf.has_partition = true;
      pf.K1 = parse_index(tok[1], line, "K1");
      pf.K2 = parse_index(tok[2], line, "K2");
    } else if (key == "op") {
      if (tok.size() < 4) throw ParseError(line, "op needs <role> <index> <catalog id>");
      OpEntry op;
      op.role = tok[1];
      op.index = parse_index(tok[2], line, "index");
      op.spec.id = tok[3];
      op.line = line;
      for (std::size_t j = 4; j < tok.size(); ++j) {
        const auto eq = tok[j].find('=');
        if (eq == std::string::npos || eq == 0)
          throw ParseError(line, "parameter '" + tok[j] + "' is not key=value");
        const std::string name = tok[j].substr(0, eq);
        if (op.spec.params.count(name)) throw ParseError(line, "duplicate parameter '" + name + "'");
        op.spec.params[name] = parse_list(tok[j].substr(eq + 1), line, name);
      }
      if (find_op(pf, op.role, op.index))
        throw ParseError(line, "duplicate op " + op.role + " " + tok[2]);
      pf.ops.push_back(std::move(op));
    } else if (key == "linop") {
      if (!have_primal || !have_dual) throw ParseError(line, "linop must follow primal and dual");
      if (tok.size() < 4) throw ParseError(line, "linop needs <k> <i> <type>");
      LinopEntry le;
      le.k = parse_index(tok[1], line, "k");
      le.i = parse_index(tok[2], line, "i");
      if (le.k >= pf.sig.K() || le.i >= pf.sig.m()) throw ParseError(line, "linop index out of range");
      if (find_linop(pf, le.k, le.i)) throw ParseError(line, "duplicate linop");
      const int rows = pf.sig.dual[le.k], cols = pf.sig.primal[le.i];
      const std::string& type = tok[3];
      if (type == "zero") {
        le.entry = LinearEntry::zero(rows, cols);
      } else if (type == "identity" || type == "scalar") {
        if (rows != cols) throw ParseError(line, type + " linop needs equal dimensions");
        if (type == "identity") {
          le.entry = LinearEntry::identity(rows);
        } else {
          if (tok.size() != 5) throw ParseError(line, "scalar linop takes one value");
          le.entry = LinearEntry::scalar(rows, parse_double(tok[4], line, "scalar"));
        }
      } else if (type == "dense") {
        Matrix M(rows, cols);
        int r = 0;
        const int start = line;
        for (;;) {
          if (!std::getline(in, raw)) throw ParseError(start, "dense linop without 'end'");
          ++line;
          if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
          const auto row = split_ws(raw);
          if (row.empty()) continue;
          if (row.size() == 1 && row[0] == "end") break;
          if (r >= rows) throw ParseError(line, "dense linop has more than " + std::to_string(rows) + " rows");
          if (static_cast<int>(row.size()) != cols)
            throw ParseError(line, "dense row needs " + std::to_string(cols) + " entries");
          for (int c = 0; c < cols; ++c) M(r, c) = parse_double(row[c], line, "matrix entry");
          ++r;
        }
        if (r != rows) throw ParseError(line, "dense linop needs " + std::to_string(rows) + " rows");
        le.entry = LinearEntry::dense(std::move(M));
      } else {
        throw ParseError(line, "unknown linop type '" + type + "'");
      }
      pf.linops.push_back(std::move(le));
    } else if (key == "vec") {
      if (tok.size() < 3 || (tok[1] != "z" && tok[1] != "r"))
        throw ParseError(line, "vec needs z|r <index> <values...>");
      VecEntry v;
      v.role = tok[1];
      v.index = parse_index(tok[2], line, "index");
      for (std::size_t j = 3; j < tok.size(); ++j) v.values.push_back(parse_double(tok[j], line, "vec"));
      pf.vecs.push_back(std::move(v));
    } else if (key == "config") {
      if (tok.size() != 3) throw ParseError(line, "config takes <key> <value>");
      if (!kConfigKeys.count(tok[1])) throw ParseError(line, "unknown config key '" + tok[1] + "'");
      pf.config[tok[1]] = parse_double(tok[2], line, tok[1]);
    } else {
      throw ParseError(line, "unknown directive '" + key + "'");
    }
  }
  if (pf.kind.empty()) throw ParseError(0, "missing 'kind' line");
  if (!have_primal || !have_dual) throw ParseError(0, "missing 'primal' or 'dual' line");
  return pf;
}

ProblemFile parse_problem_string(const std::string& text) {
  std::istringstream in(text);
  return parse_problem(in);
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_problem(in);
}

std::string serialize_problem(const ProblemFile& pf) {
  std::ostringstream out;
  out << "kind " << pf.kind << '\n';
  out << "primal";
  for (int d : pf.sig.primal) out << ' ' << d;
  out << "\ndual";
  for (int d : pf.sig.dual) out << ' ' << d;
  out << '\n';
  if (pf.has_partition) out << "partition " << pf.K1 << ' ' << pf.K2 << '\n';
  for (const auto& op : pf.ops) {
    out << "op " << op.role << ' ' << op.index << ' ' << op.spec.id;
    for (const auto& [name, vals] : op.spec.params) out << ' ' << name << '=' << format_list(vals);
    out << '\n';
  }
  for (const auto& le : pf.linops) {
    out << "linop " << le.k << ' ' << le.i << ' ';
    const LinearEntry& e = le.entry;
    switch (e.kind()) {
      case LinearEntry::Kind::Zero: out << "zero\n"; break;
      case LinearEntry::Kind::Identity: out << "identity\n"; break;
      case LinearEntry::Kind::Scalar: out << "scalar " << format_double(e.scale()) << '\n'; break;
      case LinearEntry::Kind::Dense:
        out << "dense\n";
        for (Eigen::Index r = 0; r < e.matrix().rows(); ++r) {
          for (Eigen::Index c = 0; c < e.matrix().cols(); ++c)
            out << (c ? " " : "") << format_double(e.matrix()(r, c));
          out << '\n';
        }
        out << "end\n";
        break;
    }
  }
  for (const auto& v : pf.vecs) out << "vec " << v.role << ' ' << v.index << format_vector(v.values) << '\n';
  for (const auto& [k, v] : pf.config) out << "config " << k << ' ' << format_double(v) << '\n';
  return out.str();
}

Instance build_instance(const ProblemFile& pf) {
  try {
    pf.sig.validate();
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
  const auto& sig = pf.sig;
  const std::size_t m = sig.m(), K = sig.K();
  const CatalogSpec zero_spec{"zero", {}};
  const CatalogSpec origin_spec{"indicator_point", {}};

  if (pf.kind == "system") {
    std::vector<MaximalMonotoneOp> A, B;
    std::vector<LipschitzOp> C, D;
    for (std::size_t i = 0; i < m; ++i) {
      A.push_back(monotone_or(pf, "A", i, sig.primal[i], false));
      C.push_back(lipschitz_or(pf, "C", i, sig.primal[i], false));
    }
    for (std::size_t k = 0; k < K; ++k) {
      B.push_back(monotone_or(pf, "B", k, sig.dual[k], false));
      D.push_back(lipschitz_or(pf, "Dinv", k, sig.dual[k], false));
    }
    CoupledInclusionProblem prob{sig, std::move(A), std::move(C), std::move(B), std::move(D),
                                 grid(pf), block_vec(pf, "z", sig.primal), block_vec(pf, "r", sig.dual)};
    with_line(0, [&] { prob.validate(); return 0; });
    return prob;
  }
  if (pf.kind == "multivar_min") {
    MultivariateMinProblem prob;
    prob.sig = sig;
    for (std::size_t i = 0; i < m; ++i) {
      prob.f.push_back(function_or(pf, "f", i, sig.primal[i], &zero_spec));
      prob.h.push_back(function_or(pf, "h", i, sig.primal[i], &zero_spec));
    }
    for (std::size_t k = 0; k < K; ++k) {
      prob.g.push_back(function_or(pf, "g", k, sig.dual[k], &zero_spec));
      prob.ell.push_back(function_or(pf, "ell", k, sig.dual[k], &origin_spec));
    }
    prob.L = grid(pf);
    prob.z = block_vec(pf, "z", sig.primal);
    prob.r = block_vec(pf, "r", sig.dual);
    with_line(0, [&] { prob.validate(); return 0; });
    return prob;
  }

  require_single_primal(pf);
  const int n = sig.primal[0];
  const Vector z = vec_or_zero(pf, "z", 0, n);
  std::vector<Vector> r;
  for (std::size_t k = 0; k < K; ++k) r.push_back(vec_or_zero(pf, "r", k, sig.dual[k]));
  if (pf.has_partition && !(pf.K1 <= pf.K2 && pf.K2 <= K))
    throw ParseError(0, "partition needs 0 <= K1 <= K2 <= K");

  if (pf.kind == "parallel_sum") {
    std::vector<MaximalMonotoneOp> B;
    std::vector<ParallelSumS> S;
    for (std::size_t k = 0; k < K; ++k) {
      B.push_back(monotone_or(pf, "B", k, sig.dual[k], false));
      if (k < pf.K1) S.emplace_back(monotone_or(pf, "S", k, sig.dual[k], true));
      else S.emplace_back(lipschitz_or(pf, "S", k, sig.dual[k], k < pf.K2));
    }
    ParallelSumProblem prob{n,
                            pf.K1,
                            pf.K2,
                            z,
                            monotone_or(pf, "A", 0, n, false),
                            lipschitz_or(pf, "C", 0, n, false),
                            std::move(B),
                            std::move(S),
                            column_maps(pf, false),
                            std::move(r)};
    with_line(0, [&] { prob.validate(); return 0; });
    return prob;
  }
  if (pf.kind == "common_zero") {
    std::vector<MaximalMonotoneOp> B, S;
    for (std::size_t k = 0; k < K; ++k) {
      if (sig.dual[k] != n) throw ParseError(0, "common_zero needs every dual dimension equal to the primal one");
      B.push_back(monotone_or(pf, "B", k, n, false));
      S.push_back(monotone_or(pf, "S", k, n, true));
    }
    if (!pf.linops.empty()) throw ParseError(0, "common_zero couples through identities; remove linop lines");
    CommonZeroProblem prob{n, monotone_or(pf, "A", 0, n, false), std::move(B), std::move(S)};
    with_line(0, [&] { prob.validate(); return 0; });
    return prob;
  }
  if (pf.kind == "univar_min") {
    UnivariateMinProblem prob;
    prob.dim = n;
    prob.K1 = pf.K1;
    prob.K2 = pf.K2;
    prob.z = z;
    prob.f = function_or(pf, "f", 0, n, &zero_spec);
    prob.h = function_or(pf, "h", 0, n, &zero_spec);
    for (std::size_t k = 0; k < K; ++k) {
      prob.g.push_back(function_or(pf, "g", k, sig.dual[k], &zero_spec));
      prob.phi.push_back(function_or(pf, "phi", k, sig.dual[k], nullptr));
    }
    prob.L = column_maps(pf, false);
    prob.r = std::move(r);
    with_line(0, [&] { prob.validate(); return 0; });
    return prob;
  }
  // feasibility
  FeasibilityRelaxation prob;
  prob.dim = n;
  for (std::size_t k = 0; k < K; ++k) {
    const OpEntry* set = find_op(pf, "set", k);
    if (!set) throw ParseError(0, "missing entry: op set " + std::to_string(k));
    if (set->spec.id.rfind("indicator_", 0) != 0 || !catalog_has(set->spec.id, SlotKind::Function))
      throw ParseError(set->line, "unknown catalog id '" + set->spec.id + "' for set (use indicator_*)");
    prob.sets.push_back(with_line(set->line, [&] { return make_set(set->spec, sig.dual[k]); }));
    const OpEntry* pen = find_op(pf, "penalty", k);
    if (!pen) throw ParseError(0, "missing entry: op penalty " + std::to_string(k));
    const auto omega = [&] {
      auto it = pen->spec.params.find("omega");
      if (it == pen->spec.params.end()) return 1.0;
      if (it->second.size() != 1) throw ParseError(pen->line, "omega must be a scalar");
      return it->second[0];
    };
    for (const auto& [name, _] : pen->spec.params)
      if (name != "omega") throw ParseError(pen->line, "penalty has no parameter '" + name + "'");
    if (pen->spec.id == "hard") prob.penalties.push_back(Penalty::hard());
    else if (pen->spec.id == "sq_norm") prob.penalties.push_back(Penalty::squared_norm(omega()));
    else if (pen->spec.id == "norm2") prob.penalties.push_back(Penalty::norm(omega()));
    else
      throw ParseError(pen->line, "unknown catalog id '" + pen->spec.id +
                                      "' for penalty (use hard, sq_norm or norm2)");
  }
  prob.L = column_maps(pf, true);
  with_line(0, [&] { prob.validate(); return 0; });
  return prob;
}

FbfConfig config_from(const std::map<std::string, double>& config) {
  FbfConfig cfg;
  auto get = [&](const char* key) -> std::optional<double> {
    auto it = config.find(key);
    if (it == config.end()) return std::nullopt;
    return it->second;
  };
  if (auto v = get("epsilon")) cfg.epsilon = *v;
  if (auto v = get("gamma")) cfg.gamma = *v;
  if (auto v = get("max_iters")) {
    if (!(*v >= 1.0)) throw ParameterError("max_iters must be at least 1");
    cfg.max_iters = static_cast<std::size_t>(*v);
  }
  if (auto v = get("tol")) cfg.residual_tol = *v;
  const double eta = get("error_eta").value_or(0.0);
  if (eta > 0.0)
    cfg.errors = summable_error_schedule(eta, get("error_p").value_or(2.0),
                                         static_cast<std::uint64_t>(get("seed").value_or(0.0)));
  return cfg;
}

}  // namespace monosplit::tools
