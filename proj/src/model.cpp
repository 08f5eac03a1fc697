#include "junctionlab/model.hpp"

#include <cmath>
#include <random>

namespace jl {

Poly Model::discriminant() const {
    Poly four = Poly::constant(4.0);
    Poly tseven = Poly::constant(27.0);
    return four * f.pow(3) + tseven * g.pow(2);
}

KodairaRow classify_kodaira(int ord_f, int ord_g, int ord_d) {
    auto row = [](std::string fiber, std::string alg, int n = 0) {
        return KodairaRow{std::move(fiber), std::move(alg), n};
    };
    if (ord_d == 0) return row("I0", "-");
    if (ord_f == 0 && ord_g == 0 && ord_d >= 1) {
        int n = ord_d;
        return row("I" + std::to_string(n), n >= 2 ? "A" + std::to_string(n - 1) : "-", n);
    }
    if (ord_f >= 1 && ord_g == 1 && ord_d == 2) return row("II", "-");
    if (ord_f == 1 && ord_g >= 2 && ord_d == 3) return row("III", "A1");
    if (ord_f >= 2 && ord_g == 2 && ord_d == 4) return row("IV", "A2");
    if ((ord_f == 2 && ord_g >= 3 && ord_d >= 6) ||
        (ord_f >= 2 && ord_g == 3 && ord_d >= 6)) {
        int n = ord_d - 6;
        return row("I" + std::to_string(n) + "*", "D" + std::to_string(n + 4), n);
    }
    if (ord_f >= 3 && ord_g == 4 && ord_d == 8) return row("IV*", "E6");
    if (ord_f == 3 && ord_g >= 5 && ord_d == 9) return row("III*", "E7");
    if (ord_f >= 4 && ord_g == 5 && ord_d == 10) return row("II*", "E8");
    throw invariant_error("vanishing orders (" + std::to_string(ord_f) + "," +
                          std::to_string(ord_g) + "," + std::to_string(ord_d) +
                          ") are outside the fiber table");
}

KodairaRow classify_kodaira(const Model& m) {
    return classify_kodaira(order_at_zero(m.f), order_at_zero(m.g),
                            order_at_zero(m.discriminant()));
}

namespace {

std::vector<TemplateModel> build_registry() {
    std::vector<TemplateModel> reg;
    const double radius_in[9] = {0.2002, 0.4475, 0.5850, 0.6689, 0.7250,
                                 0.7649, 0.7947, 0.8179, 0.8364};
    for (int n = 1; n <= 9; ++n) {
        TemplateModel t;
        t.name = "I" + std::to_string(n);
        t.alias = "";
        t.text = "eps = 0.01;\nf = -3;\ng = 2 + eps + s^" + std::to_string(n) + ";\n";
        t.n_expected = n;
        t.radius = radius_in[n - 1];
        t.fiber = t.name;
        t.algebra = n >= 2 ? "A" + std::to_string(n - 1) : "-";
        reg.push_back(t);
    }
    reg.push_back({"III", "", "eps = 0.01;\nf = eps + s;\ng = eps + s^2;\n", 3,
                   0.1581, "III", "A1"});
    {
        cplx e4 = 0.01 * cplx(std::cos(0.3), std::sin(0.3));
        std::string lit = format_double(e4.real()) + " + " + format_double(e4.imag()) + "i";
        reg.push_back({"IV", "", "eps = " + lit + ";\nf = 2*eps + s^2;\ng = eps + s^2;\n",
                       4, 0.5115, "IV", "A2"});
    }
    // one-parameter slice through the I0* locus; t is the loop coordinate
    reg.push_back({"I0star-slice", "I0*",
                   "a = -1;\nc = 1;\nt = 1;\neps = 0.001;\n"
                   "f = -3*c^2*s^2;\ng = 2*c^3*s^3 + a*t*s^3 + t*eps;\n",
                   6, 0.3, "I0*", "D4"});
    const double radius_instar[4] = {1.1561, 0.9201, 0.8847, 0.8813};
    for (int n = 1; n <= 4; ++n) {
        TemplateModel t;
        t.name = "I" + std::to_string(n) + "star";
        t.alias = "I" + std::to_string(n) + "*";
        t.text = "eps = 0.01;\nf = eps - 3*s^2;\ng = eps + 2*s^3 + s^" +
                 std::to_string(3 + n) + ";\n";
        t.n_expected = 6 + n;
        t.radius = radius_instar[n - 1];
        t.fiber = t.alias;
        t.algebra = "D" + std::to_string(n + 4);
        reg.push_back(t);
    }
    reg.push_back({"IVstar", "IV*", "eps = 0.01;\nf = eps + s^3;\ng = eps + s^4;\n",
                   8, 1.5093, "IV*", "E6"});
    reg.push_back({"IIIstar", "III*", "eps = 0.01;\nf = eps + s^3;\ng = eps;\n",
                   9, 1.3818, "III*", "E7"});
    reg.push_back({"IIstar", "II*", "eps = 0.01;\nf = eps;\ng = eps + s^5;\n",
                   10, 1.1945, "II*", "E8"});
    return reg;
}

// all discriminant roots pairwise separated: the deformation fully splits
bool fully_split(const Model& m, int min_points, double sep) {
    Poly d = m.discriminant();
    if (d.degree() < min_points) return false;
    std::vector<cplx> roots;
    try {
        roots = poly_roots(d);
    } catch (const numeric_error&) {
        return false;
    }
    for (size_t a = 0; a < roots.size(); ++a)
        for (size_t b = a + 1; b < roots.size(); ++b)
            if (std::abs(roots[a] - roots[b]) < sep) return false;
    return true;
}

}  // namespace

const std::vector<TemplateModel>& template_registry() {
    static const std::vector<TemplateModel> reg = build_registry();
    return reg;
}

std::optional<TemplateModel> find_template(const std::string& name) {
    for (const auto& t : template_registry())
        if (t.name == name || (!t.alias.empty() && t.alias == name)) return t;
    return std::nullopt;
}

Model deform_template(const std::string& name,
                      const std::map<std::string, cplx>& params, unsigned seed) {
    auto tpl = find_template(name);
    if (!tpl) {
        std::string known;
        for (const auto& t : template_registry())
            known += (known.empty() ? "" : ", ") + t.name;
        throw parse_error("unknown template '" + name + "' (valid: " + known + ")");
    }
    auto it = params.find("eps");
    if (it != params.end() && std::abs(it->second) == 0.0)
        throw parse_error("deformation eps must be nonzero");
    if (it == params.end() && seed != 0) {
        // seeded draw: fixed magnitude, seeded phase, retry until fully split
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> uni(0.0, 2.0 * 3.14159265358979323846);
        for (int attempt = 0; attempt < 16; ++attempt) {
            double phase = uni(rng);
            auto p = params;
            p["eps"] = 0.01 * cplx(std::cos(phase), std::sin(phase));
            ParsedModel pm = parse_model(tpl->text, p);
            Model m{pm.f, pm.g};
            if (fully_split(m, tpl->n_expected, 1e-4)) return m;
        }
        throw numeric_error("seeded deformation of '" + name +
                            "' did not fully split after 16 draws");
    }
    ParsedModel pm = parse_model(tpl->text, params);
    Model m{pm.f, pm.g};
    if (!fully_split(m, tpl->n_expected, 1e-4))
        throw numeric_error("deformed '" + name + "' discriminant is not fully split");
    return m;
}

}  // namespace jl
