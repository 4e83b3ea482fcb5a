#ifndef DHOLO_EISENSTEIN_HPP
#define DHOLO_EISENSTEIN_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <tuple>

#include <boost/rational.hpp>

#include "core.hpp"

namespace dholo {

using Rational = boost::rational<std::int64_t>;

/// Exact x + y j with rational x, y and j = e^{2 pi i / 3}.
class EisensteinNumber {
public:
    EisensteinNumber() = default;
    EisensteinNumber(Rational x, Rational y = 0) : x_(x), y_(y) {}
    EisensteinNumber(std::int64_t x, std::int64_t y) : x_(x), y_(y) {}

    static EisensteinNumber j() { return {0, 1}; }
    static EisensteinNumber j2() { return {-1, -1}; }

    [[nodiscard]] const Rational& x() const { return x_; }
    [[nodiscard]] const Rational& y() const { return y_; }

    friend EisensteinNumber operator+(const EisensteinNumber& a, const EisensteinNumber& b) {
        return {a.x_ + b.x_, a.y_ + b.y_};
    }
    friend EisensteinNumber operator-(const EisensteinNumber& a, const EisensteinNumber& b) {
        return {a.x_ - b.x_, a.y_ - b.y_};
    }
    friend EisensteinNumber operator-(const EisensteinNumber& a) { return {-a.x_, -a.y_}; }
    // j^2 = -1 - j
    friend EisensteinNumber operator*(const EisensteinNumber& a, const EisensteinNumber& b) {
        const Rational bd = a.y_ * b.y_;
        return {a.x_ * b.x_ - bd, a.x_ * b.y_ + a.y_ * b.x_ - bd};
    }
    friend EisensteinNumber operator/(const EisensteinNumber& a, const EisensteinNumber& b) {
        const Rational n = b.norm();
        if (n.numerator() == 0) throw input_error("division by zero Eisenstein number");
        EisensteinNumber t = a * b.conj();
        return {t.x_ / n, t.y_ / n};
    }
    EisensteinNumber& operator+=(const EisensteinNumber& o) { return *this = *this + o; }
    EisensteinNumber& operator-=(const EisensteinNumber& o) { return *this = *this - o; }
    EisensteinNumber& operator*=(const EisensteinNumber& o) { return *this = *this * o; }

    friend bool operator==(const EisensteinNumber& a, const EisensteinNumber& b) {
        return a.x_ == b.x_ && a.y_ == b.y_;
    }
    friend bool operator<(const EisensteinNumber& a, const EisensteinNumber& b) {
        return std::tie(a.x_, a.y_) < std::tie(b.x_, b.y_);
    }

    /// Complex conjugate: conj(j) = j^2.
    [[nodiscard]] EisensteinNumber conj() const { return {x_ - y_, -y_}; }
    /// |z|^2 = x^2 - xy + y^2.
    [[nodiscard]] Rational norm() const { return x_ * x_ - x_ * y_ + y_ * y_; }
    [[nodiscard]] bool is_zero() const { return x_.numerator() == 0 && y_.numerator() == 0; }
    [[nodiscard]] bool is_integral() const { return x_.denominator() == 1 && y_.denominator() == 1; }

    [[nodiscard]] cplx to_complex() const {
        const double x = boost::rational_cast<double>(x_);
        const double y = boost::rational_cast<double>(y_);
        return x + y * kJ;
    }

    /// Nearest element of Z[j], if within `tol` of z.
    static std::optional<EisensteinNumber> snap(cplx z, double tol) {
        const double y = z.imag() / kJ.imag();
        const double x = z.real() + 0.5 * y;
        EisensteinNumber e(static_cast<std::int64_t>(std::llround(x)), static_cast<std::int64_t>(std::llround(y)));
        if (std::abs(e.to_complex() - z) > tol) return std::nullopt;
        return e;
    }

    friend std::ostream& operator<<(std::ostream& os, const EisensteinNumber& e) {
        auto put = [&os](const Rational& r) -> std::ostream& {
            os << r.numerator();
            if (r.denominator() != 1) os << '/' << r.denominator();
            return os;
        };
        put(e.x_) << (e.y_.numerator() < 0 ? "" : "+");
        return put(e.y_) << "j";
    }

private:
    Rational x_{0};
    Rational y_{0};
};

}  // namespace dholo

#endif  // DHOLO_EISENSTEIN_HPP
