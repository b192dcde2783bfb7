// One PASS/FAIL line per acceptance criterion.
//   acceptance               run everything
//   acceptance --criterion N run one criterion

#include <cstdlib>
#include <iostream>
#include <string>

#include "checks.hpp"

int main(int argc, char **argv)
{
    using namespace protnum::checks;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--criterion N]\n";
            return 2;
        }
    }
    if (only < 0 || only > static_cast<int>(acceptance().size())) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }

    bool all = true;
    for (const auto &c : acceptance()) {
        if (only != 0 && only != c.id) {
            continue;
        }
        double seconds = 0;
        const outcome result = run_guarded(c, &seconds);
        std::cout << (result.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " (" << seconds
                  << " s)\n";
        for (const auto &note : result.notes) {
            std::cout << "      " << note << "\n";
        }
        all = all && result.pass;
    }
    return all ? 0 : 1;
}
