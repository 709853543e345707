// Reads a .form file and prints, for every form in it, the differential, the
// closure class and (for 1-forms) the integrating-factor search result.

#include <fstream>
#include <iostream>
#include <sstream>

#include "exform/exform.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: walkthrough FILE.form\n";
        return 1;
    }
    std::ifstream in(argv[1]);
    if (!in) {
        std::cerr << argv[1] << ": cannot open\n";
        return 1;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        const auto doc = exform::dsl::parse(text.str());
        for (const auto* decl : doc.forms()) {
            const auto& f = *decl;
            std::cout << exform::dsl::render(f.form, f.name) << "\n";
            const auto r = exform::classify_form(f.form);
            std::cout << "  " << exform::dsl::render(r.differential, "d" + f.name) << "\n";
            std::cout << "  class: " << exform::to_string(r.classification) << "\n";
            if (f.form.degree() == 1 && !r.closed) {
                const auto mu = exform::integrating_factor_search(f.form);
                std::cout << "  integrating factor: " << (mu.factor ? mu.factor->str() : "none (" + mu.reason + ")")
                          << "\n";
            }
        }
    } catch (const exform::Error& e) {
        std::cerr << argv[1] << ": " << e.what() << "\n";
        return 2;
    }
    return 0;
}
