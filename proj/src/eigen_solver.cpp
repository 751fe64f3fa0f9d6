// Real Schur decomposition M = Z T Z^T of a dense nonsymmetric matrix.
//
// Householder reduction to upper Hessenberg form, then implicit Francis
// double-shift QR sweeps with deflation on negligible subdiagonal entries,
// following the structure of the EISPACK hqr2 routine. Only the Schur form
// is computed; eigenvectors are not back-substituted.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>

#include "rnc/errors.hpp"
#include "rnc/spectral.hpp"

namespace rnc {
namespace {

struct SchurForm {
  Matrix t;  // quasi upper triangular
  Matrix z;  // orthogonal
  std::vector<std::complex<double>> eigenvalues;
};

// H = Q^T M Q with H upper Hessenberg; z receives Q.
void reduce_to_hessenberg(Matrix& h, Matrix& z) {
  const std::size_t n = h.rows();
  z = Matrix::identity(n);
  if (n < 3) return;
  Vector v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double scale = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) scale = std::max(scale, std::abs(h(i, k)));
    if (scale == 0.0) continue;
    double sigma = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = h(i, k) / scale;
      sigma += v[i] * v[i];
    }
    double alpha = std::sqrt(sigma);
    if (v[k + 1] > 0) alpha = -alpha;
    // v = x - alpha e1, normalized so that the reflector is I - 2 v v^T.
    v[k + 1] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(vnorm2);
    for (std::size_t i = k + 1; i < n; ++i) v[i] *= inv;

    // Left: rows k+1..n-1.
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i] * h(i, j);
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
    }
    // Right: columns k+1..n-1, every row.
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
      s *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * v[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += z(i, j) * v[j];
      s *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) z(i, j) -= s * v[j];
    }
    h(k + 1, k) = alpha * scale;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

SchurForm real_schur(const Matrix& m, std::string_view label) {
  const int nn = static_cast<int>(m.rows());
  SchurForm out;
  Matrix& h = out.t;
  Matrix& z = out.z;
  h = m;
  reduce_to_hessenberg(h, z);
  out.eigenvalues.assign(static_cast<std::size_t>(nn), {0.0, 0.0});
  auto H = [&h](int i, int j) -> double& { return h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };
  auto Z = [&z](int i, int j) -> double& { return z(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };
  auto set_eig = [&out](int i, double re, double im) { out.eigenvalues[static_cast<std::size_t>(i)] = {re, im}; };

  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(H(i, j));
  if (norm == 0.0) return out;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const long long cap = 100LL * nn;
  long long total_iterations = 0;
  int iter = 0;
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, w = 0, x = 0, y = 0, zz = 0;

  int n = nn - 1;
  while (n >= 0) {
    // Find the start of the active unreduced block.
    int l = n;
    while (l > 0) {
      s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
      if (s == 0.0) s = norm;
      if (std::abs(H(l, l - 1)) < eps * s) break;
      --l;
    }
    if (l > 0) H(l, l - 1) = 0.0;

    if (l == n) {
      H(n, n) += exshift;
      set_eig(n, H(n, n), 0.0);
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = H(n, n - 1) * H(n - 1, n);
      p = (H(n - 1, n - 1) - H(n, n)) / 2.0;
      q = p * p + w;
      zz = std::sqrt(std::abs(q));
      H(n, n) += exshift;
      H(n - 1, n - 1) += exshift;
      x = H(n, n);
      if (q >= 0) {
        zz = (p >= 0) ? p + zz : p - zz;
        const double hi = x + zz;
        const double lo = (zz != 0.0) ? x - w / zz : hi;
        set_eig(n - 1, hi, 0.0);
        set_eig(n, lo, 0.0);
        // Rotate the 2x2 block to upper triangular form.
        x = H(n, n - 1);
        s = std::abs(x) + std::abs(zz);
        p = x / s;
        q = zz / s;
        r = std::sqrt(p * p + q * q);
        p /= r;
        q /= r;
        for (int j = n - 1; j < nn; ++j) {
          zz = H(n - 1, j);
          H(n - 1, j) = q * zz + p * H(n, j);
          H(n, j) = q * H(n, j) - p * zz;
        }
        for (int i = 0; i <= n; ++i) {
          zz = H(i, n - 1);
          H(i, n - 1) = q * zz + p * H(i, n);
          H(i, n) = q * H(i, n) - p * zz;
        }
        for (int i = 0; i < nn; ++i) {
          zz = Z(i, n - 1);
          Z(i, n - 1) = q * zz + p * Z(i, n);
          Z(i, n) = q * Z(i, n) - p * zz;
        }
        H(n, n - 1) = 0.0;
      } else {
        // Conjugate pair; both entries come from the same (re, im).
        set_eig(n - 1, x + p, zz);
        set_eig(n, x + p, -zz);
      }
      n -= 2;
      iter = 0;
    } else {
      if (++total_iterations > cap) {
        std::ostringstream msg;
        msg << "eigenvalue iteration did not converge for " << label << " (" << nn << "x" << nn
            << ") after " << cap << " QR sweeps";
        throw NumericalError(msg.str());
      }
      x = H(n, n);
      y = H(n - 1, n - 1);
      w = H(n, n - 1) * H(n - 1, n);

      // Exceptional shifts break cycles on pathological inputs.
      if (iter == 10) {
        exshift += x;
        for (int i = 0; i <= n; ++i) H(i, i) -= x;
        s = std::abs(H(n, n - 1)) + std::abs(H(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / 2.0 + s);
          for (int i = 0; i <= n; ++i) H(i, i) -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      ++iter;

      // Look for two consecutive small subdiagonal elements.
      int mm = n - 2;
      while (mm >= l) {
        zz = H(mm, mm);
        r = x - zz;
        s = y - zz;
        p = (r * s - w) / H(mm + 1, mm) + H(mm, mm + 1);
        q = H(mm + 1, mm + 1) - zz - r - s;
        r = H(mm + 2, mm + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (mm == l) break;
        if (std::abs(H(mm, mm - 1)) * (std::abs(q) + std::abs(r)) <
            eps * (std::abs(p) * (std::abs(H(mm - 1, mm - 1)) + std::abs(zz) + std::abs(H(mm + 1, mm + 1)))))
          break;
        --mm;
      }
      for (int i = mm + 2; i <= n; ++i) {
        H(i, i - 2) = 0.0;
        if (i > mm + 2) H(i, i - 3) = 0.0;
      }

      // Double QR sweep on rows l..n, columns mm..n.
      for (int k = mm; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != mm) {
          p = H(k, k - 1);
          q = H(k + 1, k - 1);
          r = notlast ? H(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s == 0.0) continue;
        if (k != mm)
          H(k, k - 1) = -s * x;
        else if (l != mm)
          H(k, k - 1) = -H(k, k - 1);
        p += s;
        x = p / s;
        y = q / s;
        zz = r / s;
        q /= p;
        r /= p;
        for (int j = k; j < nn; ++j) {
          p = H(k, j) + q * H(k + 1, j);
          if (notlast) {
            p += r * H(k + 2, j);
            H(k + 2, j) -= p * zz;
          }
          H(k, j) -= p * x;
          H(k + 1, j) -= p * y;
        }
        for (int i = 0; i <= std::min(n, k + 3); ++i) {
          p = x * H(i, k) + y * H(i, k + 1);
          if (notlast) {
            p += zz * H(i, k + 2);
            H(i, k + 2) -= p * r;
          }
          H(i, k) -= p;
          H(i, k + 1) -= p * q;
        }
        for (int i = 0; i < nn; ++i) {
          p = x * Z(i, k) + y * Z(i, k + 1);
          if (notlast) {
            p += zz * Z(i, k + 2);
            Z(i, k + 2) -= p * r;
          }
          Z(i, k) -= p;
          Z(i, k + 1) -= p * q;
        }
      }
    }
  }
  // Entries below the first subdiagonal are structural zeros.
  for (int i = 2; i < nn; ++i)
    for (int j = 0; j < i - 1; ++j) H(i, j) = 0.0;
  return out;
}

bool sort_before(const std::complex<double>& a, const std::complex<double>& b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

}  // namespace

Spectrum eigen_spectrum(const Matrix& m, std::string_view label) {
  if (!m.square()) throw PreconditionError("eigen_spectrum: " + std::string(label) + " is not square");
  for (double v : m.data())
    if (!std::isfinite(v)) throw PreconditionError("eigen_spectrum: " + std::string(label) + " has non-finite entries");
  if (m.rows() == 0) return {};

  SchurForm schur = real_schur(m, label);
  Spectrum out;
  out.eigenvalues = std::move(schur.eigenvalues);
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), sort_before);
  const Matrix recon = schur.z * schur.t * schur.z.transpose();
  out.residual = (m - recon).norm_inf();
  return out;
}

}  // namespace rnc
