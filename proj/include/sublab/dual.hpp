#pragma once

#include <cmath>
#include <utility>

namespace sublab {

// First-order dual number over an arbitrary scalar type. Nesting
// Dual<Dual<double>> yields exact mixed second derivatives.
template <typename T>
struct Dual {
    T val{};
    T dot{};

    Dual() = default;
    Dual(double v) : val(v), dot() {}
    Dual(T v, T d) : val(std::move(v)), dot(std::move(d)) {}

    friend Dual operator+(const Dual& a, const Dual& b) {
        return {a.val + b.val, a.dot + b.dot};
    }
    friend Dual operator-(const Dual& a, const Dual& b) {
        return {a.val - b.val, a.dot - b.dot};
    }
    friend Dual operator-(const Dual& a) { return {-a.val, -a.dot}; }
    friend Dual operator*(const Dual& a, const Dual& b) {
        return {a.val * b.val, a.dot * b.val + a.val * b.dot};
    }
    friend Dual operator/(const Dual& a, const Dual& b) {
        return {a.val / b.val, (a.dot * b.val - a.val * b.dot) / (b.val * b.val)};
    }

    friend Dual sin(const Dual& a) {
        using std::cos;
        using std::sin;
        return {sin(a.val), a.dot * cos(a.val)};
    }
    friend Dual cos(const Dual& a) {
        using std::cos;
        using std::sin;
        return {cos(a.val), -a.dot * sin(a.val)};
    }
    friend Dual sqrt(const Dual& a) {
        using std::sqrt;
        T r = sqrt(a.val);
        return {r, a.dot / (2.0 * r)};
    }
    friend Dual exp(const Dual& a) {
        using std::exp;
        T e = exp(a.val);
        return {e, a.dot * e};
    }
    friend Dual log(const Dual& a) {
        using std::log;
        return {log(a.val), a.dot / a.val};
    }
};

// Underlying value of a possibly nested dual, used for domain checks.
inline double value_of(double x) { return x; }
template <typename T>
double value_of(const Dual<T>& d) {
    return value_of(d.val);
}

}  // namespace sublab
