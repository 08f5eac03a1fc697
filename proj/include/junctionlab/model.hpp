#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "junctionlab/poly.hpp"

namespace jl {

// y^2 = x^3 + f(s) x + g(s)
struct Model {
    Poly f, g;
    Poly discriminant() const;  // 4 f^3 + 27 g^2
};

struct KodairaRow {
    std::string fiber;    // "I3", "IV*", ...
    std::string algebra;  // "-", "A1", "D6", ...
    int n = 0;            // index for the In / In* families
};

// classify by vanishing orders (ord f, ord g, ord D) at s=0
KodairaRow classify_kodaira(int ord_f, int ord_g, int ord_d);
KodairaRow classify_kodaira(const Model& m);

struct TemplateModel {
    std::string name;      // CLI-safe name: "I3", "I0star-slice", "IVstar", ...
    std::string alias;     // fiber-style alias: "I0*", "IV*", ... ("" if same)
    std::string text;      // deformed model source, parseable by parse_model
    int n_expected;        // discriminant points in the working disc
    double radius;         // reference disc radius
    std::string fiber;     // undeformed Kodaira fiber
    std::string algebra;   // expected gauge algebra
};

const std::vector<TemplateModel>& template_registry();
std::optional<TemplateModel> find_template(const std::string& name);

// Instantiate a template with parameter overrides. A zero deformation is
// rejected; when `seed` is nonzero and no explicit eps is given, eps is drawn
// at magnitude 0.01 with a seeded phase, retrying until the discriminant
// fully splits (bounded retries).
Model deform_template(const std::string& name,
                      const std::map<std::string, cplx>& params,
                      unsigned seed = 0);

}  // namespace jl
