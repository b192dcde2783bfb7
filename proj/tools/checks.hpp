#ifndef PROTNUM_TOOLS_CHECKS_HPP
#define PROTNUM_TOOLS_CHECKS_HPP

#include <functional>
#include <string>
#include <vector>

namespace protnum::checks
{

struct outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string &what)
    {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }
};

struct criterion {
    int id = 0;
    std::string name;
    std::function<outcome()> run;
};

// The machine-checkable acceptance criteria, in order. Tolerances are fixed
// inside each check.
const std::vector<criterion> &acceptance();

// Runs one criterion, turning exceptions into a failure note.
outcome run_guarded(const criterion &c, double *seconds = nullptr);

} // namespace protnum::checks

#endif
