#pragma once

#include <string>
#include <vector>

namespace oppsim {

// Deterministic (seed-free) property suite behind the identity-check
// subcommand: exact trimming/truncation identities on integer data, the
// dual-route truncated-moment evaluation, selection against a full-sort
// oracle, counting against a naive loop, and the relative-gap-sum envelope.
struct IdentityCheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<IdentityCheckResult> run_identity_suite();

} // namespace oppsim
