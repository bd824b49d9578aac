#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <sstream>
#include <string>
#include <utility>

namespace subsig {

using BigRational = boost::multiprecision::cpp_rational;

// Exact complex rationals. Coefficient field for every identity that has to
// hold to the last bit rather than to a tolerance.
struct GaussianRational {
  BigRational re{0};
  BigRational im{0};

  GaussianRational() = default;
  GaussianRational(int v) : re(v) {}
  GaussianRational(long v) : re(v) {}
  GaussianRational(BigRational r) : re(std::move(r)) {}
  GaussianRational(BigRational r, BigRational i)
      : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational unit_i() {
    return GaussianRational(BigRational(0), BigRational(1));
  }
  static GaussianRational frac(long num, long den) {
    return GaussianRational(BigRational(num) / den);
  }

  bool is_zero() const { return re == 0 && im == 0; }

  GaussianRational operator-() const { return {-re, -im}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    BigRational r = re * o.re - im * o.im;
    BigRational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) {
    return a += b;
  }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) {
    return a -= b;
  }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) {
    return a *= b;
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    BigRational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw std::domain_error("GaussianRational: division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
    return !(a == b);
  }

  std::complex<double> to_complex() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  std::string str() const {
    if (re == 0 && im == 0) return "0";
    std::ostringstream os;
    if (re != 0) os << re;
    if (im != 0) {
      if (re != 0)
        os << (im > 0 ? "+" : "-");
      else if (im < 0)
        os << "-";
      BigRational m = im > 0 ? im : BigRational(-im);
      os << m << "i";
    }
    return os.str();
  }
};

}  // namespace subsig
