#include "regent/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace regent::io {

namespace {

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError("invalid JSON in " + path + ": " + e.what());
  }
}

RMatrix read_rows(const Json& j, int n, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) throw DomainError(std::string("\"") + name + "\" must have dim rows");
  RMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw DomainError(std::string("\"") + name + "\" rows must have dim entries");
    for (int c = 0; c < n; ++c) m(r, c) = number_from_json(row[c]);
  }
  return m;
}

}  // namespace

Json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  throw DomainError("expected a number");
}

HermitianOperator matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re")) throw DomainError("matrix JSON needs dim and re");
  const int n = j.at("dim").get<int>();
  if (n < 1) throw DomainError("matrix dimension must be positive");
  std::vector<int> subsystems;
  if (j.contains("subsystems")) subsystems = j.at("subsystems").get<std::vector<int>>();
  CMatrix m = read_rows(j.at("re"), n, "re").cast<cd>();
  if (j.contains("im")) m += cd(0, 1) * read_rows(j.at("im"), n, "im").cast<cd>();
  return HermitianOperator(m, subsystems);
}

Json matrix_to_json(const HermitianOperator& x) {
  const int n = x.dim();
  Json re = Json::array(), im = Json::array();
  bool has_im = false;
  for (int r = 0; r < n; ++r) {
    Json rr = Json::array(), ri = Json::array();
    for (int c = 0; c < n; ++c) {
      rr.push_back(x.matrix()(r, c).real());
      ri.push_back(x.matrix()(r, c).imag());
      has_im = has_im || x.matrix()(r, c).imag() != 0.0;
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  Json j = {{"dim", n}, {"subsystems", x.subsystems()}, {"re", re}};
  if (has_im) j["im"] = im;
  return j;
}

HermitianOperator load_matrix(const std::string& path) { return matrix_from_json(read_file(path)); }

void save_matrix(const std::string& path, const HermitianOperator& x) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << matrix_to_json(x).dump(2) << "\n";
}

Json program_to_json(const conic::ConicProgram& p) {
  Json blocks = Json::array();
  for (const conic::ConeSpec& b : p.blocks) {
    Json jb = {{"kind", conic::to_string(b.kind)}, {"n", b.n}};
    if (b.fixed_first) jb["fixed_first"] = matrix_to_json(HermitianOperator(*b.fixed_first));
    blocks.push_back(jb);
  }
  Json entries = Json::array();
  SparseMatrix e = p.E;
  e.makeCompressed();
  for (int k = 0; k < e.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(e, k); it; ++it) entries.push_back({it.row(), it.col(), it.value()});
  return {{"blocks", blocks},
          {"objective", {{"c", std::vector<double>(p.c.data(), p.c.data() + p.c.size())}, {"offset", p.offset}}},
          {"equalities",
           {{"rows", p.E.rows()},
            {"b", std::vector<double>(p.b.data(), p.b.data() + p.b.size())},
            {"entries", entries}}}};
}

conic::ConicProgram program_from_json(const Json& j) {
  try {
    conic::ConicProgram p;
    for (const Json& jb : j.at("blocks")) {
      conic::ConeSpec s;
      s.kind = conic::cone_kind_from_string(jb.at("kind").get<std::string>());
      s.n = jb.at("n").get<int>();
      if (jb.contains("fixed_first")) s.fixed_first = matrix_from_json(jb.at("fixed_first")).matrix();
      p.blocks.push_back(s);
    }
    const int nv = p.num_vars();
    const std::vector<double> c = j.at("objective").at("c").get<std::vector<double>>();
    if (static_cast<int>(c.size()) != nv) throw DomainError("objective length does not match the blocks");
    p.c = Eigen::Map<const RVector>(c.data(), nv);
    p.offset = j.at("objective").value("offset", 0.0);
    const Json& eq = j.at("equalities");
    const std::vector<double> b = eq.at("b").get<std::vector<double>>();
    const int rows = eq.value("rows", static_cast<int>(b.size()));
    if (rows != static_cast<int>(b.size())) throw DomainError("equality row count does not match b");
    p.b = Eigen::Map<const RVector>(b.data(), rows);
    std::vector<Triplet> trips;
    for (const Json& e : eq.at("entries")) {
      const int r = e.at(0).get<int>(), col = e.at(1).get<int>();
      if (r < 0 || r >= rows || col < 0 || col >= nv) throw DomainError("equality entry out of range");
      trips.emplace_back(r, col, e.at(2).get<double>());
    }
    p.E.resize(rows, nv);
    p.E.setFromTriplets(trips.begin(), trips.end());
    p.validate();
    return p;
  } catch (const Json::exception& e) {
    throw DomainError(std::string("invalid program JSON: ") + e.what());
  }
}

conic::ConicProgram load_program(const std::string& path) { return program_from_json(read_file(path)); }

Json to_json(const SandwichReport& r) {
  return {{"m", r.m},
          {"lower", number(r.lower)},
          {"upper", number(r.upper)},
          {"gap_bound", number(r.gap_bound)},
          {"d", r.d},
          {"lower_accuracy", number(r.lower_accuracy)},
          {"upper_accuracy", number(r.upper_accuracy)},
          {"order_change", number(r.order_change)},
          {"use_symmetry", r.use_symmetry},
          {"assumptions_certified", r.assumptions_certified},
          {"infinite", r.infinite},
          {"dmax", number(r.dmax)}};
}

Json to_json(const apps::BoundReport& r) {
  Json j = {{"descriptor", r.descriptor}, {"k", r.k}, {"m", r.m}};
  auto put = [&j](const char* name, const std::optional<double>& v) {
    if (v) j[name] = number(*v);
  };
  put("e_wd1", r.e_wd1);
  put("e_wd2", r.e_wd2);
  put("e_wjz", r.e_wjz);
  put("d_m_pptk", r.d_m_pptk);
  put("thauma", r.thauma);
  put("rains_upper", r.rains_upper);
  put("rains_lower", r.rains_lower);
  put("analytic_reference", r.analytic_reference);
  put("p", r.p);
  put("gamma", r.gamma);
  return j;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const apps::Table& t, const std::vector<std::string>& header_comments) {
  for (const std::string& c : header_comments) out << "# " << c << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

}  // namespace regent::io
