#include "lrgd/funcspec.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace lrgd {

namespace {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
};

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
};

SExpr parse_node(Cursor& cur) {
  cur.skip_ws();
  if (cur.pos >= cur.text.size()) throw Error("funcspec: unexpected end");
  if (cur.text[cur.pos] == '(') {
    ++cur.pos;
    SExpr node;
    node.is_list = true;
    while (true) {
      cur.skip_ws();
      if (cur.pos >= cur.text.size())
        throw Error("funcspec: missing ')'");
      if (cur.text[cur.pos] == ')') {
        ++cur.pos;
        return node;
      }
      node.items.push_back(parse_node(cur));
    }
  }
  if (cur.text[cur.pos] == ')') throw Error("funcspec: unexpected ')'");
  SExpr node;
  const std::size_t start = cur.pos;
  while (cur.pos < cur.text.size() && cur.text[cur.pos] != '(' &&
         cur.text[cur.pos] != ')' &&
         !std::isspace(static_cast<unsigned char>(cur.text[cur.pos])))
    ++cur.pos;
  node.atom = cur.text.substr(start, cur.pos - start);
  return node;
}

double to_number(const SExpr& e) {
  if (e.is_list) throw Error("funcspec: expected a number");
  char* end = nullptr;
  const double v = std::strtod(e.atom.c_str(), &end);
  if (end == e.atom.c_str() || *end != '\0')
    throw Error("funcspec: bad number '" + e.atom + "'");
  return v;
}

const std::string& head(const SExpr& e) {
  if (!e.is_list || e.items.empty() || e.items.front().is_list)
    throw Error("funcspec: expected (name ...)");
  return e.items.front().atom;
}

Matrix parse_rows(const SExpr& rows) {
  if (rows.items.size() < 2) throw Error("funcspec: rows needs entries");
  std::vector<std::vector<double>> data;
  for (std::size_t i = 1; i < rows.items.size(); ++i) {
    const SExpr& row = rows.items[i];
    if (!row.is_list) throw Error("funcspec: each row must be a list");
    std::vector<double> vals;
    for (const auto& cell : row.items) vals.push_back(to_number(cell));
    if (!data.empty() && vals.size() != data.front().size())
      throw Error("funcspec: ragged rows");
    data.push_back(std::move(vals));
  }
  Matrix m(static_cast<Eigen::Index>(data.size()),
           static_cast<Eigen::Index>(data.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = data[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Profile parse_profile(const SExpr& prof) {
  if (prof.items.size() < 2) throw Error("funcspec: profile needs an id");
  const std::string& id = prof.items[1].atom;
  if (id == "squares") return squares_profile();
  if (id == "nonconvex") {
    const double a =
        prof.items.size() > 2 ? to_number(prof.items[2]) : 2.0;
    return nonconvex_profile(a);
  }
  if (id == "cubic") return cubic_profile();
  if (id == "sine") return sine_profile();
  if (id == "linear") return linear_profile();
  if (id == "quadratic") {
    Vector d(static_cast<Eigen::Index>(prof.items.size() - 2));
    for (std::size_t i = 2; i < prof.items.size(); ++i)
      d[static_cast<Eigen::Index>(i - 2)] = to_number(prof.items[i]);
    return quadratic_profile(d);
  }
  throw Error("funcspec: unknown profile '" + id + "'");
}

Objective build(const SExpr& e) {
  const std::string& name = head(e);
  if (name == "quadratic") {
    if (e.items.size() != 2 || !e.items[1].is_list)
      throw Error("funcspec: quadratic needs (diag ...) or (rows ...)");
    const SExpr& arg = e.items[1];
    if (head(arg) == "diag") {
      Vector d(static_cast<Eigen::Index>(arg.items.size() - 1));
      for (std::size_t i = 1; i < arg.items.size(); ++i)
        d[static_cast<Eigen::Index>(i - 1)] = to_number(arg.items[i]);
      return make_quadratic(Matrix(d.asDiagonal()));
    }
    if (head(arg) == "rows") return make_quadratic(parse_rows(arg));
    throw Error("funcspec: quadratic needs diag or rows");
  }
  if (name == "ridge") {
    const SExpr* prof = nullptr;
    const SExpr* rows = nullptr;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      if (head(e.items[i]) == "profile") prof = &e.items[i];
      if (head(e.items[i]) == "rows") rows = &e.items[i];
    }
    if (!prof || !rows)
      throw Error("funcspec: ridge needs (profile ...) and (rows ...)");
    return make_ridge(parse_rows(*rows), parse_profile(*prof));
  }
  if (name == "geometric" || name == "loggeometric") {
    if (e.items.size() != 2)
      throw Error("funcspec: geometric needs a dimension");
    auto pair = make_geometric_product(static_cast<int>(to_number(e.items[1])));
    return name == "geometric" ? std::move(pair.first)
                               : std::move(pair.second);
  }
  if (name == "scale") {
    if (e.items.size() != 3) throw Error("funcspec: scale needs c and spec");
    return scale_objective(to_number(e.items[1]), build(e.items[2]));
  }
  if (name == "sum" || name == "product") {
    if (e.items.size() != 3)
      throw Error("funcspec: " + name + " needs two specs");
    Objective a = build(e.items[1]);
    Objective b = build(e.items[2]);
    return name == "sum" ? sum_objectives(std::move(a), std::move(b))
                         : product_objectives(std::move(a), std::move(b));
  }
  if (name == "exp") {
    if (e.items.size() != 2) throw Error("funcspec: exp needs a spec");
    return compose_objective([](double v) { return std::exp(v); },
                             [](double v) { return std::exp(v); }, "exp",
                             build(e.items[1]));
  }
  throw Error("funcspec: unknown form '" + name + "'");
}

} // namespace

Objective parse_objective(const std::string& spec) {
  Cursor cur{spec};
  SExpr root = parse_node(cur);
  if (!cur.done()) throw Error("funcspec: trailing text");
  return build(root);
}

} // namespace lrgd
