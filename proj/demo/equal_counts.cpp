// Prints N_p for small primes on y^2 + y = x^3 - x, then the primes sharing N_p = 1057.
#include <iostream>

#include "ellnum/ellnum.hpp"

int main() {
    using namespace ellnum;
    const CurveModel e = parse_curve("0,0,1,-1,0");
    std::cout << "curve " << e.spec() << ", discriminant " << e.discriminant() << "\n";

    const NpTable t = build_table(e, 50);
    for (const auto& entry : t.entries()) std::cout << "N_" << entry.p << " = " << entry.np << "\n";
    for (u64 p : t.bad_primes()) std::cout << "p = " << p << " is bad\n";

    const auto rec = g1(e, 1057);
    std::cout << "primes with N_p = 1057:";
    for (u64 p : rec.primes) std::cout << " " << p;
    std::cout << "\n";

    const auto sol = gk_solutions(e, 3, 3360);
    std::cout << "3-sets with N-product 3360: " << sol.count() << "\n";
    for (const auto& s : sol.solutions) std::cout << "  {" << s[0] << ", " << s[1] << ", " << s[2] << "}\n";
}
