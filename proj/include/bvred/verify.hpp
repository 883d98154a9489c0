#pragma once

#include "bvred/correspond.hpp"
#include "bvred/dsl.hpp"

namespace bvred {

struct TargetResult {
    std::string target;
    std::string status; // pass | fail | unsupported | input-error
    std::vector<std::string> notes;   // the exact certificates behind a pass
    std::vector<std::string> caveats; // Lie-algebra quotient, truncation, ...
    double ms = 0;

    static TargetResult failure(std::string target, std::string why);
};

struct VerificationReport {
    std::string system;
    std::vector<TargetResult> targets;

    bool allPass() const;
    int exitCode() const; // 0 pass, 1 fail, 2 unsupported, 3 input error
    std::string json(bool withTimings = true) const; // schema bvred-report/1
    std::string text() const;
};

// Runs the given targets (or the file's own list, or a default set).
VerificationReport verifySystem(const SystemFile& sf,
                                std::vector<std::string> targets = {});

TargetResult runCheck(const SystemFile& sf);       // differentials + master equation
TargetResult runMomentMaps(const SystemFile& sf);  // d mu = 0 and closure
TargetResult verifyThmA(const SystemFile& sf, bool withBetti);
TargetResult verifyThmB(const SystemFile& sf);
TargetResult verifyThmC(const SystemFile& sf);
TargetResult verifyTwisted(const SystemFile& sf);
TargetResult verifyMagicCube(const SystemFile& sf);
TargetResult verifyBeckChevalley(const SystemFile& sf);
TargetResult runZeroLocus(const SystemFile& sf);

CohomologyReport cohomologyOf(const SystemFile& sf);

// H^0 of the model over monomials of total exponent <= bound: cycles are
// exact kernels (no projection), boundaries come from sources within
// bound + slack. Exact lower-bound-honest count, caveat carried by callers.
long invariantH0Window(const SemiFreeCdga& model, int bound, int slack = 2);

// Runs the targets twice, the second time with a permuted field declaration
// order, and demands identical conclusions and reports.
struct DeterminismResult {
    bool identical = false;
    std::string detail;
};
DeterminismResult determinismCheck(const SystemFile& sf,
                                   std::vector<std::string> targets = {});

} // namespace bvred
