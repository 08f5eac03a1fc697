#pragma once
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace jl {

using cplx = std::complex<double>;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Polynomial in one variable, coefficients ascending by degree.
struct Poly {
    std::vector<cplx> c;

    Poly() = default;
    explicit Poly(std::vector<cplx> coeffs) : c(std::move(coeffs)) {}
    static Poly constant(cplx v) { return Poly{{v}}; }
    static Poly variable() { return Poly{{cplx(0.0), cplx(1.0)}}; }

    // index of highest coefficient with |c_k| > 0, or -1 for the zero poly
    int degree() const;
    cplx eval(cplx s) const;
    Poly derivative() const;
    bool is_zero() const { return degree() < 0; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly pow(int n) const;
    bool operator==(const Poly& o) const;
};

// order of vanishing at s=0; ORD_INF for the zero polynomial
inline constexpr int ORD_INF = 1000;
int order_at_zero(const Poly& p, double rel_tol = 1e-12);

// all complex roots (Durand-Kerner with Newton polish); degree >= 1 required
std::vector<cplx> poly_roots(const Poly& p);

// roots of x^3 + f x + g
std::vector<cplx> cubic_roots(cplx f, cplx g);

// model text: statements "name = expr;" over s, +, -, *, ^n, parens,
// real/imaginary literals; f and g must both be defined. params are
// pre-bound names that win over in-file definitions of the same name.
struct ParsedModel {
    Poly f, g;
    std::map<std::string, cplx> params_used;
};
ParsedModel parse_model(const std::string& text,
                        const std::map<std::string, cplx>& params = {});

// canonical text form; parse_model(pretty_print(m)) reproduces coefficients
std::string pretty_print(const Poly& f, const Poly& g);
std::string format_double(double v);  // shortest round-trip
std::string format_cplx(cplx v);

}  // namespace jl
