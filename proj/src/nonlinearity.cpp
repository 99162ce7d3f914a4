#include "collapse_kit/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace collapse_kit {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::SaturatedExp:
      return "saturated";
    case ModelKind::Kerr:
      return "kerr";
    case ModelKind::KerrMPI:
      return "kerr-mpi";
    case ModelKind::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// TabulatedResponse

TabulatedResponse::TabulatedResponse(std::vector<double> intensity, std::vector<double> values)
    : x_(std::move(intensity)), y_(std::move(values)) {
  const std::size_t n = x_.size();
  if (n != y_.size()) throw InputError("tabulated response: column lengths differ");
  if (n < 4) throw InputError("tabulated response: at least four rows are required");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(x_[i + 1] > x_[i])) throw InputError("tabulated response: intensities must be strictly increasing");
  }
  for (double v : y_) {
    if (!std::isfinite(v)) throw InputError("tabulated response: non-finite value");
  }

  std::vector<double> h(n - 1);
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    d[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  // Tridiagonal system for M_1..M_{n-2}; the not-a-knot rows eliminate
  // M_0 and M_{n-1}.
  const std::size_t k = n - 2;
  std::vector<double> lower(k, 0.0), diag(k, 0.0), upper(k, 0.0), rhs(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t i = j + 1;
    lower[j] = h[i - 1];
    diag[j] = 2.0 * (h[i - 1] + h[i]);
    upper[j] = h[i];
    rhs[j] = 6.0 * (d[i] - d[i - 1]);
  }
  const double h0 = h[0], h1 = h[1];
  diag[0] += h0 * (h0 + h1) / h1;
  upper[0] -= h0 * h0 / h1;
  const double hm = h[n - 2], hm1 = h[n - 3];
  diag[k - 1] += hm * (hm + hm1) / hm1;
  lower[k - 1] -= hm * hm / hm1;
  // Thomas algorithm.
  for (std::size_t j = 1; j < k; ++j) {
    const double w = lower[j] / diag[j - 1];
    diag[j] -= w * upper[j - 1];
    rhs[j] -= w * rhs[j - 1];
  }
  std::vector<double> inner(k);
  inner[k - 1] = rhs[k - 1] / diag[k - 1];
  for (std::size_t j = k - 1; j-- > 0;) inner[j] = (rhs[j] - upper[j] * inner[j + 1]) / diag[j];

  m_.assign(n, 0.0);
  for (std::size_t j = 0; j < k; ++j) m_[j + 1] = inner[j];
  m_[0] = ((h0 + h1) * m_[1] - h0 * m_[2]) / h1;
  m_[n - 1] = ((hm + hm1) * m_[n - 2] - hm * m_[n - 3]) / hm1;

  cumulative_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double hi = h[i];
    // Exact integral of the cubic over the segment.
    cumulative_[i + 1] =
        cumulative_[i] + 0.5 * hi * (y_[i] + y_[i + 1]) - hi * hi * hi * (m_[i] + m_[i + 1]) / 24.0;
  }
}

TabulatedResponse TabulatedResponse::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open tabulated response file: " + path.string());
  std::vector<double> xs, ys;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    if (!(row >> a)) continue;  // blank or comment-only line
    if (!(row >> b)) throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected two columns");
    std::string extra;
    if (row >> extra) throw InputError(path.string() + ":" + std::to_string(line_no) + ": trailing data");
    xs.push_back(a);
    ys.push_back(b);
  }
  return TabulatedResponse(std::move(xs), std::move(ys));
}

std::size_t TabulatedResponse::segment(double I) const {
  if (I < x_.front() || I > x_.back()) throw DomainError("tabulated response: intensity outside table");
  auto it = std::upper_bound(x_.begin(), x_.end(), I);
  std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
  if (i == 0) return 0;
  return std::min(i - 1, x_.size() - 2);
}

double TabulatedResponse::value(double I) const { return derivative(I, 0); }

double TabulatedResponse::derivative(double I, int order) const {
  const std::size_t i = segment(I);
  const double h = x_[i + 1] - x_[i];
  const double t = I - x_[i];
  const double mi = m_[i], mj = m_[i + 1];
  const double slope = (y_[i + 1] - y_[i]) / h - h * (2.0 * mi + mj) / 6.0;
  const double cubic = (mj - mi) / (6.0 * h);
  switch (order) {
    case 0:
      return y_[i] + t * (slope + t * (0.5 * mi + t * cubic));
    case 1:
      return slope + t * (mi + 3.0 * t * cubic);
    case 2:
      return mi + 6.0 * t * cubic;
    case 3:
      return 6.0 * cubic;
    default:
      return 0.0;
  }
}

double TabulatedResponse::integral(double I) const {
  const std::size_t i = segment(I);
  const double h = x_[i + 1] - x_[i];
  const double t = I - x_[i];
  const double mi = m_[i], mj = m_[i + 1];
  const double slope = (y_[i + 1] - y_[i]) / h - h * (2.0 * mi + mj) / 6.0;
  const double cubic = (mj - mi) / (6.0 * h);
  return cumulative_[i] + t * (y_[i] + t * (0.5 * slope + t * (mi / 6.0 + 0.25 * t * cubic)));
}

// ---------------------------------------------------------------------------
// NonlinearityModel

namespace {

void require_common(double alpha, double beta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("nonlinearity: alpha must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("nonlinearity: beta must be nonnegative");
}

}  // namespace

NonlinearityModel NonlinearityModel::saturated_exp(double alpha, double b, double beta) {
  require_common(alpha, beta);
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("saturated model: b must be positive");
  NonlinearityModel m;
  m.kind_ = ModelKind::SaturatedExp;
  m.alpha_ = alpha;
  m.beta_ = beta;
  m.b_ = b;
  m.domain_ = {0.0, 50.0 / b};
  return m;
}

NonlinearityModel NonlinearityModel::kerr(double alpha, double beta) {
  require_common(alpha, beta);
  NonlinearityModel m;
  m.kind_ = ModelKind::Kerr;
  m.alpha_ = alpha;
  m.beta_ = beta;
  return m;
}

NonlinearityModel NonlinearityModel::kerr_mpi(double alpha, double beta, double gamma, int photon_order) {
  require_common(alpha, beta);
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("kerr-mpi model: gamma must be nonnegative");
  if (photon_order < 2) throw DomainError("kerr-mpi model: photon order K must be >= 2");
  NonlinearityModel m;
  m.kind_ = ModelKind::KerrMPI;
  m.alpha_ = alpha;
  m.beta_ = beta;
  m.gamma_ = gamma;
  m.photon_order_ = photon_order;
  if (gamma > 0.0) m.domain_ = {0.0, 10.0 * std::pow(1.0 / gamma, 1.0 / (photon_order - 1))};
  return m;
}

NonlinearityModel NonlinearityModel::tabulated(double alpha, double beta, TabulatedResponse table) {
  require_common(alpha, beta);
  if (table.first() < 0.0) throw InputError("tabulated response: negative intensity");
  NonlinearityModel m;
  m.kind_ = ModelKind::Tabulated;
  m.alpha_ = alpha;
  m.beta_ = beta;
  m.domain_ = {table.first(), table.last()};
  m.table_ = std::make_shared<const TabulatedResponse>(std::move(table));
  return m;
}

numerics::Interval NonlinearityModel::focusing_domain() const {
  switch (kind_) {
    case ModelKind::KerrMPI:
      if (gamma_ > 0.0) return {0.0, std::pow(1.0 / gamma_, 1.0 / (photon_order_ - 1))};
      return domain_;
    case ModelKind::Tabulated: {
      // Leading run of knots with positive response.
      double hi = table_->first();
      for (double x : table_->abscissae()) {
        if (table_->value(x) <= 0.0) break;
        hi = x;
      }
      return {table_->first(), hi};
    }
    default:
      return domain_;
  }
}

void NonlinearityModel::require_in_domain(double I) const {
  if (!(I >= domain_.lo) || !(I <= domain_.hi)) {
    throw DomainError("intensity " + std::to_string(I) + " outside the " + to_string(kind_) + " model domain [" +
                      std::to_string(domain_.lo) + ", " + std::to_string(domain_.hi) + "]");
  }
}

double varphi(const NonlinearityModel& model, double I) {
  model.require_in_domain(I);
  switch (model.kind()) {
    case ModelKind::SaturatedExp:
      return I * std::exp(-model.b() * I);
    case ModelKind::Kerr:
      return 1.0;
    case ModelKind::KerrMPI:
      return 1.0 - model.gamma() * std::pow(I, model.photon_order() - 1);
    case ModelKind::Tabulated:
      return model.table()->value(I);
  }
  return 0.0;
}

double varphi_derivative(const NonlinearityModel& model, double I) {
  model.require_in_domain(I);
  switch (model.kind()) {
    case ModelKind::SaturatedExp:
      return (1.0 - model.b() * I) * std::exp(-model.b() * I);
    case ModelKind::Kerr:
      return 0.0;
    case ModelKind::KerrMPI: {
      const int k = model.photon_order();
      return -model.gamma() * (k - 1) * std::pow(I, k - 2);
    }
    case ModelKind::Tabulated:
      return model.table()->derivative(I, 1);
  }
  return 0.0;
}

double refractive_index(const NonlinearityModel& model, double I) {
  model.require_in_domain(I);
  switch (model.kind()) {
    case ModelKind::SaturatedExp: {
      const double b = model.b();
      // 1 - e^{-x}(1 + x) loses digits for small x; -expm1(-x) - x e^{-x} does not.
      const double x = b * I;
      return (-std::expm1(-x) - x * std::exp(-x)) / (b * b);
    }
    case ModelKind::Kerr:
      return I;
    case ModelKind::KerrMPI: {
      const int k = model.photon_order();
      return I - model.gamma() * std::pow(I, k) / k;
    }
    case ModelKind::Tabulated:
      return model.table()->integral(I);
  }
  return 0.0;
}

double big_phi(const NonlinearityModel& model, double I) { return refractive_index(model, I); }

double psi(const NonlinearityModel& model, double I) {
  model.require_in_domain(I);
  if (model.kind() == ModelKind::SaturatedExp) return std::exp(model.b() * I) / model.alpha();
  const double phi = varphi(model, I);
  if (phi == 0.0) throw SingularNonlinearityError("psi: varphi(I) vanishes at I = " + std::to_string(I));
  return I / (model.alpha() * phi);
}

bool check_saturated_condition(const NonlinearityModel& model) {
  switch (model.kind()) {
    case ModelKind::SaturatedExp:  // sigma = 1/b
    case ModelKind::Kerr:          // sigma = I
      return true;
    case ModelKind::KerrMPI:
      // sigma = I (1 - g I^{K-1}) / (1 + (K-2) g I^{K-1}), affine only for g = 0.
      return model.gamma() == 0.0;
    case ModelKind::Tabulated:
      break;
  }
  // sigma = I phi / (phi - I phi'); sigma' is analytic in the spline
  // derivatives and sigma'' is taken by central differences of sigma'.
  const TabulatedResponse& t = *model.table();
  auto sigma_prime = [&t](double I) {
    const double p = t.value(I);
    const double p1 = t.derivative(I, 1);
    const double p2 = t.derivative(I, 2);
    const double den = p - I * p1;
    return (p * p - I * I * p1 * p1 + I * I * p * p2) / (den * den);
  };
  const double lo = std::max(t.first(), 1e-6);
  const double hi = t.last();
  const double h = 1e-4 * (hi - lo);
  const int samples = 64;
  for (int i = 1; i < samples; ++i) {
    const double I = lo + (hi - lo) * i / samples;
    if (I - h < lo || I + h > hi) continue;
    const double s2 = (sigma_prime(I + h) - sigma_prime(I - h)) / (2.0 * h);
    if (!std::isfinite(s2) || std::abs(s2) > 1e-9 * std::max(1.0, std::abs(sigma_prime(I)))) return false;
  }
  return true;
}

double phi_lower_increment(const NonlinearityModel& model, double from, double delta) {
  const double to = from + delta;
  if (!(from > 0.0) || !(to > 0.0)) throw DomainError("phi_lower: intensity must be positive");
  model.require_in_domain(from);
  model.require_in_domain(to);
  switch (model.kind()) {
    case ModelKind::SaturatedExp: {
      const double b = model.b();
      return -std::exp(-b * from) * std::expm1(-b * delta) / b;
    }
    case ModelKind::Kerr:
      return std::log1p(delta / from);
    case ModelKind::KerrMPI: {
      const int k = model.photon_order();
      const double g = model.gamma();
      const double log_part = std::log1p(delta / from);
      if (g == 0.0) return log_part;
      // to^{K-1} - from^{K-1} = from^{K-1} expm1((K-1) log(to/from))
      const double pow_diff = std::pow(from, k - 1) * std::expm1((k - 1) * log_part);
      return log_part - g * pow_diff / (k - 1);
    }
    case ModelKind::Tabulated: {
      numerics::QuadConfig qc;
      qc.abs_tol = 1e-13;
      qc.rel_tol = 1e-11;
      const TabulatedResponse& t = *model.table();
      return numerics::adaptive_quad([&t](double I) { return t.value(I) / I; }, from, to, qc);
    }
  }
  return 0.0;
}

double phi_lower_difference(const NonlinearityModel& model, double from, double to) {
  return phi_lower_increment(model, from, to - from);
}

double phi_lower(const NonlinearityModel& model, double I) { return phi_lower_difference(model, 1.0, I); }

}  // namespace collapse_kit
