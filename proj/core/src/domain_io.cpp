#include "chf/domain_io.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

namespace chf {

namespace {

struct Node {
  std::string value;
  std::vector<std::pair<std::string, Node>> children;

  const Node* find(const std::string& key) const {
    for (const auto& [k, n] : children)
      if (k == key) return &n;
    return nullptr;
  }
  std::vector<const Node*> all(const std::string& key) const {
    std::vector<const Node*> out;
    for (const auto& [k, n] : children)
      if (k == key) out.push_back(&n);
    return out;
  }
};

Node parse_tree(std::istream& in) {
  Node root;
  std::vector<std::pair<int, Node*>> stack{{-1, &root}};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t indent = line.find_first_not_of(" \t");
    if (indent == std::string::npos) continue;
    std::string body = line.substr(indent);
    while (!body.empty() && (body.back() == ' ' || body.back() == '\r'))
      body.pop_back();
    auto colon = body.find(':');
    if (colon == std::string::npos)
      throw Error("domain file line " + std::to_string(lineno) +
                  ": expected 'key:' or 'key: value'");
    std::string key = body.substr(0, colon);
    std::string value = body.substr(colon + 1);
    std::size_t vs = value.find_first_not_of(" \t");
    value = (vs == std::string::npos) ? "" : value.substr(vs);
    while (stack.size() > 1 && static_cast<int>(indent) <= stack.back().first)
      stack.pop_back();
    Node* parent = stack.back().second;
    parent->children.emplace_back(key, Node{value, {}});
    stack.emplace_back(static_cast<int>(indent),
                       &parent->children.back().second);
  }
  return root;
}

std::vector<double> numbers(const std::string& s) {
  std::istringstream in(s);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

double scalar(const Node& n, const std::string& key) {
  const Node* c = n.find(key);
  if (!c) throw Error("domain file: missing key '" + key + "'");
  auto v = numbers(c->value);
  if (v.size() != 1) throw Error("domain file: '" + key + "' wants one number");
  return v[0];
}

double scalar_or(const Node& n, const std::string& key, double dflt) {
  return n.find(key) ? scalar(n, key) : dflt;
}

Point2 point(const Node& n, const std::string& key) {
  const Node* c = n.find(key);
  if (!c) throw Error("domain file: missing key '" + key + "'");
  auto v = numbers(c->value);
  if (v.size() != 2) throw Error("domain file: '" + key + "' wants two numbers");
  return {v[0], v[1]};
}

ParametricCurve parse_curve(const Node& n) {
  const Node* kind = n.find("kind");
  if (!kind) throw Error("domain file: curve without 'kind'");
  const std::string& k = kind->value;
  if (k == "segment") {
    return ParametricCurve::segment(point(n, "p0"), point(n, "p1"));
  } else if (k == "arc") {
    return ParametricCurve::circular_arc(point(n, "center"),
                                         scalar(n, "radius"),
                                         scalar(n, "theta0"),
                                         scalar(n, "theta1"));
  } else if (k == "cubic") {
    const Node* cx = n.find("cx");
    const Node* cy = n.find("cy");
    if (!cx || !cy) throw Error("domain file: cubic wants 'cx' and 'cy'");
    auto vx = numbers(cx->value), vy = numbers(cy->value);
    if (vx.size() != 4 || vy.size() != 4)
      throw Error("domain file: cubic wants four coefficients per axis");
    return ParametricCurve::cubic({vx[0], vx[1], vx[2], vx[3]},
                                  {vy[0], vy[1], vy[2], vy[3]});
  } else if (k == "polar") {
    const Node* cosn = n.find("cos");
    if (!cosn) throw Error("domain file: polar wants 'cos' coefficients");
    std::vector<double> sin_coeffs;
    if (const Node* sn = n.find("sin")) sin_coeffs = numbers(sn->value);
    return ParametricCurve::polar_graph(
        point(n, "center"), numbers(cosn->value), sin_coeffs,
        scalar_or(n, "theta0", 0.0), scalar_or(n, "theta1", 2.0 * M_PI));
  }
  throw Error("domain file: unknown curve kind '" + k + "'");
}

}  // namespace

Domain parse_domain(std::istream& in, DomainOptions opts) {
  Node root = parse_tree(in);
  const Node* dom = root.find("domain");
  if (!dom) throw Error("domain file: missing top-level 'domain:'");
  std::vector<BoundaryLoop> loops;
  for (const Node* ln : dom->all("loop")) {
    BoundaryLoop loop;
    const Node* orient = ln->find("orientation");
    std::string o = orient ? orient->value : "outer";
    if (o == "outer") loop.orientation = Orientation::Outer;
    else if (o == "hole") loop.orientation = Orientation::Hole;
    else throw Error("domain file: orientation must be 'outer' or 'hole'");
    for (const Node* cn : ln->all("curve")) loop.curves.push_back(parse_curve(*cn));
    if (loop.curves.empty()) throw Error("domain file: loop without curves");
    loops.push_back(std::move(loop));
  }
  if (loops.empty()) throw Error("domain file: no loops");
  return Domain::build(std::move(loops), opts);
}

Domain load_domain_file(const std::string& path, DomainOptions opts) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open domain file: " + path);
  return parse_domain(in, opts);
}

}  // namespace chf
