#include "natconv/quadrature.hpp"

#include <stdexcept>
#include <string>

namespace natconv {

namespace {

void add_orbit3(QuadratureRule& rule, double a, double w)
{
    const double b = 1.0 - 2.0 * a;
    rule.points.push_back({a, a, b});
    rule.points.push_back({a, b, a});
    rule.points.push_back({b, a, a});
    rule.weights.insert(rule.weights.end(), 3, w);
}

void add_orbit6(QuadratureRule& rule, double a, double b, double w)
{
    const double c = 1.0 - a - b;
    rule.points.push_back({a, b, c});
    rule.points.push_back({a, c, b});
    rule.points.push_back({b, a, c});
    rule.points.push_back({b, c, a});
    rule.points.push_back({c, a, b});
    rule.points.push_back({c, b, a});
    rule.weights.insert(rule.weights.end(), 6, w);
}

QuadratureRule make_degree1()
{
    QuadratureRule r;
    r.degree = 1;
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(1.0);
    return r;
}

QuadratureRule make_degree2()
{
    QuadratureRule r;
    r.degree = 2;
    add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
    return r;
}

// Dunavant rules; node and weight values solved from the moment equations to
// full double precision.
QuadratureRule make_degree4()
{
    QuadratureRule r;
    r.degree = 4;
    add_orbit3(r, 0.44594849091596488632, 0.22338158967801146570);
    add_orbit3(r, 0.091576213509770743460, 0.10995174365532186764);
    return r;
}

QuadratureRule make_degree6()
{
    QuadratureRule r;
    r.degree = 6;
    add_orbit3(r, 0.24928674517091042129, 0.11678627572637936603);
    add_orbit3(r, 0.063089014491502228340, 0.050844906370206816921);
    add_orbit6(r, 0.053145049844816947353, 0.31035245103378440542, 0.082851075618373575194);
    return r;
}

}  // namespace

const QuadratureRule& quadrature_rule(int degree)
{
    static const QuadratureRule d1 = make_degree1();
    static const QuadratureRule d2 = make_degree2();
    static const QuadratureRule d4 = make_degree4();
    static const QuadratureRule d6 = make_degree6();
    switch (degree) {
    case 1: return d1;
    case 2: return d2;
    case 4: return d4;
    case 6: return d6;
    default:
        throw std::invalid_argument("quadrature_rule: unsupported degree " + std::to_string(degree) +
                                    " (supported: 1, 2, 4, 6)");
    }
}

}  // namespace natconv
