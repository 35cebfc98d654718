#include "aet/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace aet {
namespace {

SmoothedBall ball2(double x1, double x2, double ro, double ri, double a, Shape s = Shape::Ball) {
  return {{x1, x2, 0.0}, ro, ri, a, s};
}

SmoothedBall ball3(double x1, double x2, double x3, double ro, double ri, double a) {
  return {{x1, x2, x3}, ro, ri, a, Shape::Ball};
}

double distance(const SmoothedBall& b, const std::array<double, 3>& x, int dim) {
  if (b.shape == Shape::Square) {
    double m = 0.0;
    for (int a = 0; a < dim; ++a) m = std::max(m, std::abs(x[a] - b.center[a]));
    return m;
  }
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += (x[a] - b.center[a]) * (x[a] - b.center[a]);
  return std::sqrt(s);
}

}  // namespace

double smoothed_profile(double r, double r_in, double r_out) {
  if (!(r_in > 0.0) || !(r_in < r_out)) {
    throw std::invalid_argument("smoothed_profile needs 0 < r_in < r_out");
  }
  if (r <= r_in) return 1.0;
  if (r >= r_out) return 0.0;
  const double width = r_out - r_in;
  const double inner = width / (r_in - r);  // -> -inf as r -> r_in
  if (inner < -700.0) return 1.0;
  const double outer = 2.0 * width / (r - r_out) * std::exp(inner);
  if (!std::isfinite(outer) || outer < -700.0) return 0.0;
  return std::exp(outer);
}

PhantomSpec builtin_phantom(std::string_view name) {
  PhantomSpec p;
  if (name == "table1-2d") {
    p.dim = 2;
    p.balls = {
        ball2(-0.54, 0.54, 0.26, 0.24, 1),  ball2(0.0, 0.6, 0.24, 0.22, -1),   ball2(0.6, 0.6, 0.16, 0.14, 1),
        ball2(-0.6, 0.0, 0.16, 0.14, -1),   ball2(0.6, 0.0, 0.26, 0.24, -1),   ball2(-0.54, -0.54, 0.26, 0.24, 1),
        ball2(0.0, -0.6, 0.24, 0.22, -1),   ball2(0.6, -0.6, 0.16, 0.14, 1),   ball2(0.18, 0.18, 0.16, 0.14, -1),
        ball2(0.18, -0.18, 0.16, 0.14, 1),  ball2(-0.18, 0.18, 0.16, 0.14, 1), ball2(-0.18, -0.18, 0.16, 0.14, -1),
    };
  } else if (name == "table2-3d") {
    p.dim = 3;
    p.balls = {
        ball3(-0.615, -0.54, 0, 0.26, 0.22, 0.5), ball3(-0.6, 0, 0, 0.24, 0.20, 1),
        ball3(0.6, 0.6, 0, 0.16, 0.12, 0.5),      ball3(0, -0.6, 0, 0.16, 0.12, 1),
        ball3(0, 0.6, 0, 0.26, 0.22, 1),          ball3(-0.54, -0.54, 0, 0.26, 0.22, 0.5),
        ball3(-0.6, 0, 0, 0.24, 0.20, 1),         ball3(-0.6, 0.6, 0, 0.16, 0.12, 0.5),
        ball3(0.18, 0.18, 0, 0.16, 0.12, 1),      ball3(-0.18, 0.18, 0, 0.16, 0.12, 0.5),
        ball3(0.18, -0.18, 0, 0.16, 0.12, 0.5),   ball3(-0.18, -0.18, 0, 0.16, 0.12, 1),
        ball3(0, 0, 0.6, 0.18, 0.14, -1),         ball3(0, 0, 0.6, 0.30, 0.26, 1),
        ball3(0, 0, -0.46, 0.38, 0.34, 0.5),      ball3(0, 0, -0.46, 0.16, 0.12, 0.5),
    };
  } else if (name == "corners-2d") {
    p.dim = 2;
    p.balls = {
        ball2(-0.45, 0.45, 0.22, 0.20, 1, Shape::Square),   ball2(0.45, 0.45, 0.16, 0.14, -1, Shape::Square),
        ball2(0.45, -0.45, 0.22, 0.20, 1, Shape::Square),   ball2(-0.45, -0.45, 0.16, 0.14, -1, Shape::Square),
        ball2(0.0, 0.0, 0.12, 0.10, 1, Shape::Square),      ball2(0.0, 0.55, 0.10, 0.08, 1),
        ball2(0.0, -0.55, 0.10, 0.08, -1),
    };
  } else {
    throw std::invalid_argument("unknown builtin phantom '" + std::string(name) +
                                "' (known: table1-2d, table2-3d, corners-2d)");
  }
  return p;
}

void validate(const PhantomSpec& spec) {
  if (spec.dim != 2 && spec.dim != 3) throw std::invalid_argument("phantom dimension must be 2 or 3");
  for (std::size_t j = 0; j < spec.balls.size(); ++j) {
    const auto& b = spec.balls[j];
    const std::string tag = "phantom element " + std::to_string(j + 1);
    if (!(b.r_in > 0.0) || !(b.r_in < b.r_out)) throw std::invalid_argument(tag + ": needs 0 < r_in < r_out");
    for (int a = 0; a < spec.dim; ++a) {
      if (std::abs(b.center[a]) + b.r_out >= 1.0) {
        throw std::invalid_argument(tag + ": support touches the cube boundary");
      }
    }
  }
}

double evaluate(const PhantomSpec& spec, const std::array<double, 3>& x) {
  double f = 0.0;
  for (const auto& b : spec.balls) {
    const double r = distance(b, x, spec.dim);
    if (r < b.r_out) f += b.alpha * smoothed_profile(r, b.r_in, b.r_out);
  }
  return f;
}

ScalarField rasterize(const PhantomSpec& spec, const Grid& grid, PhantomOutput output) {
  if (spec.dim != grid.dim()) throw std::invalid_argument("phantom dimension does not match grid");
  validate(spec);
  ScalarField f = sample(grid, [&](const std::array<double, 3>& x) { return evaluate(spec, x); });
  if (output == PhantomOutput::Sigma) {
    for (auto& v : f.values()) v = std::exp(v);
  }
  return f;
}

PhantomSpec parse_phantom(std::string_view text, int dim) {
  PhantomSpec spec;
  spec.dim = dim;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::size_t need = static_cast<std::size_t>(dim) + 3;
    if (tok.size() != need && tok.size() != need + 1) {
      throw FormatError("phantom line " + std::to_string(lineno) + ": expected " + std::to_string(need) +
                        " numbers and an optional shape");
    }
    SmoothedBall b;
    try {
      for (int a = 0; a < dim; ++a) b.center[a] = std::stod(tok[a]);
      b.r_out = std::stod(tok[dim]);
      b.r_in = std::stod(tok[dim + 1]);
      b.alpha = std::stod(tok[dim + 2]);
    } catch (const std::logic_error&) {
      throw FormatError("phantom line " + std::to_string(lineno) + ": not a number");
    }
    if (tok.size() == need + 1) {
      if (tok.back() == "square") {
        b.shape = Shape::Square;
      } else if (tok.back() != "ball") {
        throw FormatError("phantom line " + std::to_string(lineno) + ": unknown shape '" + tok.back() + "'");
      }
    }
    spec.balls.push_back(b);
  }
  validate(spec);
  return spec;
}

PhantomSpec read_phantom(const std::filesystem::path& path, int dim) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open phantom file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_phantom(ss.str(), dim);
}

std::string format_phantom(const PhantomSpec& spec) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << (spec.dim == 2 ? "# x1 x2 r_out r_in alpha\n" : "# x1 x2 x3 r_out r_in alpha\n");
  for (const auto& b : spec.balls) {
    for (int a = 0; a < spec.dim; ++a) os << b.center[a] << ' ';
    os << b.r_out << ' ' << b.r_in << ' ' << b.alpha;
    if (b.shape == Shape::Square) os << " square";
    os << '\n';
  }
  return os.str();
}

}  // namespace aet
