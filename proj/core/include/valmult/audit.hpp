#pragma once

#include "valmult/blowup.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace valmult {

// Cross checks between independent descriptions of one resolution:
// A = a/b against the integral of the multiplicity along the dual tree,
// the three ways of reading b, Noether pairings against resultants, and the
// Laplacian round trip of every tracked ideal and curve.
struct AuditReport {
    long contexts = 0, divisors = 0, pairings = 0, potentials = 0;
    std::vector<std::string> failures;  // first few only
    long failure_count = 0;
    bool ok() const { return failure_count == 0; }
    void merge(const AuditReport& o);
};

AuditReport audit_context(const Context& c);

// Audits every context destroyed while the scope is alive. Not reentrant.
class AuditScope {
public:
    AuditScope();
    ~AuditScope();
    AuditScope(const AuditScope&) = delete;
    AuditScope& operator=(const AuditScope&) = delete;
    AuditReport report() const;

private:
    struct State;
    std::shared_ptr<State> st_;
};

}  // namespace valmult
