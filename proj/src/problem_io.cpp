#include "sops/problem_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace sops {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path, what);
}

const json& field(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Vec parse_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    v[static_cast<int>(i)] = as_number(j[i], path);
  }
  return v;
}

// bound arrays admit null for an absent bound
Vec parse_bound(const json& j, double missing, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    v[static_cast<int>(i)] =
        j[i].is_null() ? missing : as_number(j[i], path);
  }
  return v;
}

Mat parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a list of rows");
  size_t cols = 0;
  for (size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array()) fail(path, "row " + std::to_string(r) +
                                         " is not an array");
    if (r == 0) {
      cols = j[r].size();
      if (cols == 0) fail(path, "empty row");
    } else if (j[r].size() != cols) {
      fail(path, "ragged rows");
    }
  }
  Mat m(j.size(), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    for (size_t c = 0; c < cols; ++c) {
      m(static_cast<int>(r), static_cast<int>(c)) = as_number(j[r][c], path);
    }
  }
  return m;
}

Descriptor parse_descriptor(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a descriptor object");
  Descriptor d;
  d.kind = as_string(field(j, "type", path), path + ".type");
  if (j.contains("lo")) d.lo = parse_bound(j["lo"], -kInf, path + ".lo");
  if (j.contains("hi")) d.hi = parse_bound(j["hi"], kInf, path + ".hi");
  if (j.contains("M")) d.M = parse_matrix(j["M"], path + ".M");
  if (j.contains("P")) d.M = parse_matrix(j["P"], path + ".P");
  if (j.contains("c")) d.v = parse_vector(j["c"], path + ".c");
  if (j.contains("d")) d.v = parse_vector(j["d"], path + ".d");
  if (j.contains("a")) d.v = parse_vector(j["a"], path + ".a");
  if (j.contains("b")) {
    if (j["b"].is_array()) {
      d.v = parse_vector(j["b"], path + ".b");
    } else {
      d.weight = as_number(j["b"], path + ".b");
    }
  }
  if (j.contains("weight")) {
    d.weight = as_number(j["weight"], path + ".weight");
  }
  if (j.contains("alpha")) d.alpha = as_number(j["alpha"], path + ".alpha");
  return d;
}

json descriptor_to_json(const Descriptor& d) {
  json j;
  j["type"] = d.kind;
  auto vec_to_json = [](const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) {
      if (std::isinf(v[i])) {
        a.push_back(nullptr);
      } else {
        a.push_back(v[i]);
      }
    }
    return a;
  };
  auto mat_to_json = [](const Mat& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  if (d.lo.size() > 0) j["lo"] = vec_to_json(d.lo);
  if (d.hi.size() > 0) j["hi"] = vec_to_json(d.hi);
  if (d.M.size() > 0) j["M"] = mat_to_json(d.M);
  if (d.kind == "normal_cone_halfspace") {
    j["a"] = vec_to_json(d.v);
    j["b"] = d.weight;
  } else if (d.v.size() > 0) {
    j["c"] = vec_to_json(d.v);
  }
  if (d.kind == "subdiff_l1") j["weight"] = d.weight;
  if (d.alpha != 0.0) j["alpha"] = d.alpha;
  return j;
}

LayoutPtr parse_layout(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty block "
                                             "list");
  std::vector<std::pair<std::string, int>> blocks;
  for (size_t b = 0; b < j.size(); ++b) {
    std::string p = path + "[" + std::to_string(b) + "]";
    if (!j[b].is_object()) fail(p, "expected {label, dim}");
    blocks.emplace_back(as_string(field(j[b], "label", p), p + ".label"),
                        as_int(field(j[b], "dim", p), p + ".dim"));
  }
  try {
    return SpaceLayout::make(std::move(blocks));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

Descriptor descriptor_or_default(const json& ops, const std::string& label,
                                 const char* family, const char* fallback,
                                 const std::string& base) {
  std::string path = base + "." + family + "." + label;
  if (!ops.contains(family) || !ops[family].contains(label)) {
    Descriptor d;
    d.kind = fallback;
    return d;
  }
  return parse_descriptor(ops[family][label], path);
}

template <class Builder>
auto build_at(Builder&& make, const Descriptor& d, int dim,
              const std::string& path) {
  try {
    return make(d, dim);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

ScheduleConfig parse_schedule(const json& root) {
  ScheduleConfig cfg;
  if (!root.contains("schedule")) return cfg;
  const json& s = root["schedule"];
  const std::string base = "schedule";
  if (s.contains("policy")) {
    try {
      cfg.policy =
          block_policy_from_string(as_string(s["policy"], base + ".policy"));
    } catch (const std::invalid_argument& e) {
      fail(base + ".policy", e.what());
    }
  }
  if (s.contains("P")) cfg.P = as_int(s["P"], base + ".P");
  if (s.contains("T")) cfg.T = as_int(s["T"], base + ".T");
  if (s.contains("seed")) {
    cfg.seed = static_cast<std::uint64_t>(as_int(s["seed"], base + ".seed"));
  }
  if (s.contains("lag_policy")) {
    try {
      cfg.lag_policy = lag_policy_from_string(
          as_string(s["lag_policy"], base + ".lag_policy"));
    } catch (const std::invalid_argument& e) {
      fail(base + ".lag_policy", e.what());
    }
  }
  if (s.contains("fixed_lag")) {
    cfg.fixed_lag = as_int(s["fixed_lag"], base + ".fixed_lag");
  }
  if (s.contains("chunk")) cfg.chunk = as_int(s["chunk"], base + ".chunk");
  return cfg;
}

ProblemSpec parse_raw(const json& root) {
  const json& spaces = field(root, "spaces", "spaces");
  LayoutPtr h = parse_layout(field(spaces, "H", "spaces"), "spaces.H");
  LayoutPtr g = parse_layout(field(spaces, "G", "spaces"), "spaces.G");

  if (!root.contains("operators") || !root["operators"].is_object() ||
      root["operators"].empty()) {
    fail("operators", "no blocks");
  }
  const json& ops = root["operators"];

  ProblemSpec spec;
  spec.h_layout = h;
  spec.g_layout = g;
  for (int i = 0; i < h->block_count(); ++i) {
    const std::string& lb = h->label(i);
    const int dim = h->dim(i);
    spec.A.push_back(build_at(make_resolvent,
                              descriptor_or_default(ops, lb, "A", "zero",
                                                    "operators"),
                              dim, "operators.A." + lb));
    spec.C.push_back(build_at(make_cocoercive,
                              descriptor_or_default(ops, lb, "C", "zero",
                                                    "operators"),
                              dim, "operators.C." + lb));
    spec.Q.push_back(build_at(make_lipschitz,
                              descriptor_or_default(ops, lb, "Q", "zero",
                                                    "operators"),
                              dim, "operators.Q." + lb));
  }
  {
    Descriptor rdesc;
    rdesc.kind = "zero";
    if (ops.contains("R")) rdesc = parse_descriptor(ops["R"], "operators.R");
    try {
      spec.R = make_coupling(rdesc, h);
    } catch (const std::invalid_argument& e) {
      fail("operators.R", e.what());
    }
  }
  for (int k = 0; k < g->block_count(); ++k) {
    const std::string& lb = g->label(k);
    const int dim = g->dim(k);
    spec.Bm.push_back(build_at(make_resolvent,
                               descriptor_or_default(ops, lb, "Bm", "zero",
                                                     "operators"),
                               dim, "operators.Bm." + lb));
    spec.Bc.push_back(build_at(make_cocoercive,
                               descriptor_or_default(ops, lb, "Bc", "zero",
                                                     "operators"),
                               dim, "operators.Bc." + lb));
    spec.Bl.push_back(build_at(make_lipschitz,
                               descriptor_or_default(ops, lb, "Bl", "zero",
                                                     "operators"),
                               dim, "operators.Bl." + lb));
    spec.Dm.push_back(build_at(make_resolvent,
                               descriptor_or_default(ops, lb, "Dm",
                                                     "zero_inverse",
                                                     "operators"),
                               dim, "operators.Dm." + lb));
    spec.Dc.push_back(build_at(make_cocoercive,
                               descriptor_or_default(ops, lb, "Dc", "zero",
                                                     "operators"),
                               dim, "operators.Dc." + lb));
    spec.Dl.push_back(build_at(make_lipschitz,
                               descriptor_or_default(ops, lb, "Dl", "zero",
                                                     "operators"),
                               dim, "operators.Dl." + lb));
  }

  if (root.contains("linear")) {
    const json& lin = root["linear"];
    if (!lin.is_array()) fail("linear", "expected a list of entries");
    for (size_t e = 0; e < lin.size(); ++e) {
      std::string p = "linear[" + std::to_string(e) + "]";
      std::string kl = as_string(field(lin[e], "k", p), p + ".k");
      std::string il = as_string(field(lin[e], "i", p), p + ".i");
      int k = g->index_of(kl);
      int i = h->index_of(il);
      if (k < 0) fail(p + ".k", "unknown dual block '" + kl + "'");
      if (i < 0) fail(p + ".i", "unknown primal block '" + il + "'");
      Mat m = parse_matrix(field(lin[e], "rows", p), p + ".rows");
      if (m.rows() != g->dim(k) || m.cols() != h->dim(i)) {
        fail("linear L[" + kl + "," + il + "]",
             "shape " + std::to_string(m.rows()) + "x" +
                 std::to_string(m.cols()) + " != " +
                 std::to_string(g->dim(k)) + "x" + std::to_string(h->dim(i)));
      }
      spec.L.emplace(std::make_pair(k, i), LinearOp(std::move(m)));
    }
  }

  spec.sstar = BlockVec(h);
  spec.r = BlockVec(g);
  if (root.contains("offsets")) {
    const json& off = root["offsets"];
    auto load = [&](const char* key, BlockVec& out, const LayoutPtr& lay) {
      if (!off.contains(key)) return;
      for (auto it = off[key].begin(); it != off[key].end(); ++it) {
        std::string p = std::string("offsets.") + key + "." + it.key();
        int b = lay->index_of(it.key());
        if (b < 0) fail(p, "unknown block");
        Vec v = parse_vector(it.value(), p);
        if (v.size() != lay->dim(b)) fail(p, "wrong length");
        out.block(b) = v;
      }
    };
    load("sstar", spec.sstar, h);
    load("r", spec.r, g);
  }
  return spec;
}

VISpec parse_vi(const json& root) {
  VISpec vi;
  const json& blocks = field(root, "blocks", "blocks");
  if (!blocks.is_array() || blocks.empty()) fail("blocks", "no blocks");
  std::vector<std::pair<std::string, int>> hb;
  vi.g_dim = as_int(field(root, "g_dim", "g_dim"), "g_dim");
  for (size_t b = 0; b < blocks.size(); ++b) {
    std::string p = "blocks[" + std::to_string(b) + "]";
    std::string label = as_string(field(blocks[b], "label", p), p + ".label");
    int dim = as_int(field(blocks[b], "dim", p), p + ".dim");
    hb.emplace_back(label, dim);
    vi.E.push_back(parse_descriptor(field(blocks[b], "E", p), p + ".E"));
    vi.F.push_back(parse_descriptor(field(blocks[b], "F", p), p + ".F"));
    Mat m = parse_matrix(field(blocks[b], "L", p), p + ".L");
    if (m.rows() != vi.g_dim || m.cols() != dim) {
      fail(p + ".L", "shape must be g_dim x dim");
    }
    vi.L.push_back(LinearOp(std::move(m)));
  }
  vi.h_layout = SpaceLayout::make(std::move(hb));
  vi.Bm = build_at(make_resolvent,
                   parse_descriptor(field(root, "Bm", "Bm"), "Bm"), vi.g_dim,
                   "Bm");
  vi.Bc = build_at(make_cocoercive,
                   parse_descriptor(field(root, "Bc", "Bc"), "Bc"), vi.g_dim,
                   "Bc");
  Descriptor bl;
  bl.kind = "zero";
  if (root.contains("Bl")) bl = parse_descriptor(root["Bl"], "Bl");
  vi.Bl = build_at(make_lipschitz, bl, vi.g_dim, "Bl");
  return vi;
}

MinSpec parse_min(const json& root) {
  MinSpec m;
  const json& primal = field(root, "primal", "primal");
  const json& dual = field(root, "dual", "dual");
  if (!primal.is_array() || primal.empty()) fail("primal", "no blocks");
  if (!dual.is_array() || dual.empty()) fail("dual", "no blocks");
  std::vector<std::pair<std::string, int>> hb, gb;

  for (size_t b = 0; b < primal.size(); ++b) {
    std::string p = "primal[" + std::to_string(b) + "]";
    MinPrimalBlock blk;
    blk.label = as_string(field(primal[b], "label", p), p + ".label");
    blk.dim = as_int(field(primal[b], "dim", p), p + ".dim");
    Descriptor f;
    f.kind = "zero";
    if (primal[b].contains("f")) f = parse_descriptor(primal[b]["f"],
                                                      p + ".f");
    Descriptor phi;
    phi.kind = "zero";
    if (primal[b].contains("phi")) {
      phi = parse_descriptor(primal[b]["phi"], p + ".phi");
    }
    blk.f = build_at(make_resolvent, f, blk.dim, p + ".f");
    blk.phi = build_at(make_cocoercive, phi, blk.dim, p + ".phi");
    hb.emplace_back(blk.label, blk.dim);
    m.primal.push_back(std::move(blk));
  }
  for (size_t b = 0; b < dual.size(); ++b) {
    std::string p = "dual[" + std::to_string(b) + "]";
    MinDualBlock blk;
    blk.label = as_string(field(dual[b], "label", p), p + ".label");
    blk.dim = as_int(field(dual[b], "dim", p), p + ".dim");
    Descriptor g;
    g.kind = "zero";
    if (dual[b].contains("g")) g = parse_descriptor(dual[b]["g"], p + ".g");
    Descriptor psi;
    psi.kind = "zero";
    if (dual[b].contains("psi")) {
      psi = parse_descriptor(dual[b]["psi"], p + ".psi");
    }
    Descriptor h;
    h.kind = "zero_inverse";
    if (dual[b].contains("h")) h = parse_descriptor(dual[b]["h"], p + ".h");
    blk.g = build_at(make_resolvent, g, blk.dim, p + ".g");
    blk.psi = build_at(make_cocoercive, psi, blk.dim, p + ".psi");
    blk.h = build_at(make_resolvent, h, blk.dim, p + ".h");
    gb.emplace_back(blk.label, blk.dim);
    m.dual.push_back(std::move(blk));
  }

  LayoutPtr h_layout = SpaceLayout::make(hb);
  LayoutPtr g_layout = SpaceLayout::make(gb);
  if (root.contains("linear")) {
    const json& lin = root["linear"];
    if (!lin.is_array()) fail("linear", "expected a list of entries");
    for (size_t e = 0; e < lin.size(); ++e) {
      std::string p = "linear[" + std::to_string(e) + "]";
      std::string kl = as_string(field(lin[e], "k", p), p + ".k");
      std::string il = as_string(field(lin[e], "i", p), p + ".i");
      int k = g_layout->index_of(kl);
      int i = h_layout->index_of(il);
      if (k < 0) fail(p + ".k", "unknown dual block '" + kl + "'");
      if (i < 0) fail(p + ".i", "unknown primal block '" + il + "'");
      Mat mat = parse_matrix(field(lin[e], "rows", p), p + ".rows");
      if (mat.rows() != g_layout->dim(k) || mat.cols() != h_layout->dim(i)) {
        fail("linear L[" + kl + "," + il + "]", "wrong shape");
      }
      m.L.emplace(std::make_pair(k, i), LinearOp(std::move(mat)));
    }
  }
  if (root.contains("theta")) {
    try {
      m.theta = make_coupling(parse_descriptor(root["theta"], "theta"),
                              h_layout);
    } catch (const std::invalid_argument& e) {
      fail("theta", e.what());
    }
  }
  return m;
}

}  // namespace

ProblemSpec ParsedProblem::to_spec() const {
  if (std::holds_alternative<ProblemSpec>(problem)) {
    return std::get<ProblemSpec>(problem);
  }
  if (std::holds_alternative<VISpec>(problem)) {
    return vi_to_problem(std::get<VISpec>(problem));
  }
  return min_to_problem(std::get<MinSpec>(problem));
}

ParsedProblem parse_problem_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("document", e.what());
  }
  if (!root.is_object()) fail("document", "expected an object");

  ParsedProblem out;
  out.kind = "raw";
  if (root.contains("kind")) out.kind = as_string(root["kind"], "kind");
  if (out.kind == "raw") {
    out.problem = parse_raw(root);
  } else if (out.kind == "vi") {
    out.problem = parse_vi(root);
  } else if (out.kind == "min") {
    out.problem = parse_min(root);
  } else {
    fail("kind", "must be one of raw|vi|min");
  }
  out.schedule = parse_schedule(root);
  if (root.contains("params")) {
    const json& p = root["params"];
    if (p.contains("sigma")) out.sigma = as_number(p["sigma"],
                                                   "params.sigma");
    if (p.contains("lambda")) {
      out.lambda = as_number(p["lambda"], "params.lambda");
    }
    if (p.contains("eps_scale")) {
      out.eps_scale = as_number(p["eps_scale"], "params.eps_scale");
    }
  }

  ProblemSpec spec = out.to_spec();
  auto violations = validate(spec);
  if (!violations.empty()) {
    std::string msg = "validation failed:";
    for (const auto& v : violations) msg += "\n  " + v;
    fail("document", msg);
  }
  return out;
}

ParsedProblem parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

std::string serialize_problem(const ProblemSpec& spec) {
  json root;
  root["kind"] = "raw";
  auto layout_to_json = [](const SpaceLayout& l) {
    json a = json::array();
    for (int b = 0; b < l.block_count(); ++b) {
      a.push_back({{"label", l.label(b)}, {"dim", l.dim(b)}});
    }
    return a;
  };
  root["spaces"]["H"] = layout_to_json(*spec.h_layout);
  root["spaces"]["G"] = layout_to_json(*spec.g_layout);

  json ops;
  auto emit = [&](const char* family, const auto& vec, const SpaceLayout& l) {
    for (int b = 0; b < l.block_count(); ++b) {
      ops[family][l.label(b)] = descriptor_to_json(vec[b]->descriptor());
    }
  };
  emit("A", spec.A, *spec.h_layout);
  emit("C", spec.C, *spec.h_layout);
  emit("Q", spec.Q, *spec.h_layout);
  ops["R"] = descriptor_to_json(spec.R->descriptor());
  emit("Bm", spec.Bm, *spec.g_layout);
  emit("Bc", spec.Bc, *spec.g_layout);
  emit("Bl", spec.Bl, *spec.g_layout);
  emit("Dm", spec.Dm, *spec.g_layout);
  emit("Dc", spec.Dc, *spec.g_layout);
  emit("Dl", spec.Dl, *spec.g_layout);
  root["operators"] = std::move(ops);

  json lin = json::array();
  for (const auto& [ki, l] : spec.L) {
    json rows = json::array();
    for (int r = 0; r < l.matrix().rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < l.matrix().cols(); ++c) {
        row.push_back(l.matrix()(r, c));
      }
      rows.push_back(row);
    }
    lin.push_back({{"k", spec.g_layout->label(ki.first)},
                   {"i", spec.h_layout->label(ki.second)},
                   {"rows", rows}});
  }
  root["linear"] = std::move(lin);

  json off;
  for (int i = 0; i < spec.n_primal(); ++i) {
    json a = json::array();
    Vec v = spec.sstar.block(i);
    for (int j = 0; j < v.size(); ++j) a.push_back(v[j]);
    off["sstar"][spec.h_layout->label(i)] = a;
  }
  for (int k = 0; k < spec.n_dual(); ++k) {
    json a = json::array();
    Vec v = spec.r.block(k);
    for (int j = 0; j < v.size(); ++j) a.push_back(v[j]);
    off["r"][spec.g_layout->label(k)] = a;
  }
  root["offsets"] = std::move(off);
  return root.dump(2);
}

namespace {

bool descriptors_equal(const Descriptor& a, const Descriptor& b) {
  auto veq = [](const Vec& x, const Vec& y) {
    return x.size() == y.size() && (x.size() == 0 || x == y);
  };
  auto meq = [](const Mat& x, const Mat& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() &&
           (x.size() == 0 || x == y);
  };
  return a.kind == b.kind && meq(a.M, b.M) && veq(a.v, b.v) &&
         veq(a.lo, b.lo) && veq(a.hi, b.hi) && a.weight == b.weight;
}

}  // namespace

bool structurally_equal(const ProblemSpec& a, const ProblemSpec& b) {
  if (!a.h_layout->same_as(*b.h_layout)) return false;
  if (!a.g_layout->same_as(*b.g_layout)) return false;
  auto fam_eq = [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return false;
    for (size_t j = 0; j < x.size(); ++j) {
      if (!descriptors_equal(x[j]->descriptor(), y[j]->descriptor())) {
        return false;
      }
    }
    return true;
  };
  if (!fam_eq(a.A, b.A) || !fam_eq(a.C, b.C) || !fam_eq(a.Q, b.Q)) {
    return false;
  }
  if (!fam_eq(a.Bm, b.Bm) || !fam_eq(a.Bc, b.Bc) || !fam_eq(a.Bl, b.Bl)) {
    return false;
  }
  if (!fam_eq(a.Dm, b.Dm) || !fam_eq(a.Dc, b.Dc) || !fam_eq(a.Dl, b.Dl)) {
    return false;
  }
  if (!descriptors_equal(a.R->descriptor(), b.R->descriptor())) return false;
  if (a.L.size() != b.L.size()) return false;
  for (const auto& [ki, l] : a.L) {
    auto it = b.L.find(ki);
    if (it == b.L.end()) return false;
    if (l.matrix() != it->second.matrix()) return false;
  }
  return a.sstar.data() == b.sstar.data() && a.r.data() == b.r.data();
}

}  // namespace sops
