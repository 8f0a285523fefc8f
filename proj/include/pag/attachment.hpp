#pragma once

// Attachment rules f: N_0 -> (0, inf). A new vertex at step m connects to an
// existing vertex of indegree d with probability f(d)/(m-1), so admissibility
// requires 0 < f(d) <= d+1. The declared gamma is the least slope with
// f(k) <= gamma*k + 1, which drives the theoretical rate exponents.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pag {

enum class FKind { Linear, Power, Constant, Table };

// First admissibility violation found by validate().
struct FViolation {
    uint64_t k;
    double fk;
    double bound;
    std::string message;
};

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& what, size_t pos) : std::runtime_error(what), position(pos) {}
};

class AttachmentFunction {
  public:
    static AttachmentFunction linear(double gamma, double eta);
    static AttachmentFunction power(double a, double b, double c);
    static AttachmentFunction constant(double c);
    static AttachmentFunction table(std::vector<double> values);

    double evaluate(uint64_t k) const;
    double operator()(uint64_t k) const { return evaluate(k); }

    FKind kind() const { return kind_; }
    // Least gamma with f(k) <= gamma*k + 1 (exact slope for Linear, derived
    // for the other kinds), clamped into (0,1).
    double gamma() const { return gamma_; }
    // f(0).
    double eta() const { return eta_; }
    bool is_linear() const { return kind_ == FKind::Linear; }
    const std::vector<double>& params() const { return params_; }

    // CLI-facing textual form; parse_spec(render()) reproduces the function.
    std::string render() const;

  private:
    AttachmentFunction(FKind kind, double gamma, double eta, std::vector<double> params)
        : kind_(kind), gamma_(gamma), eta_(eta), params_(std::move(params)) {}

    FKind kind_;
    double gamma_;
    double eta_;
    std::vector<double> params_;  // Linear: {gamma, eta}; Power: {a,b,c}; Constant: {c}; Table: values
};

// Checks 0 < f(k) <= k+1 and f(k) <= gamma*k + 1 for k in [0, horizon].
// Linear and Power are also checked symbolically, so a pass covers all k.
std::optional<FViolation> validate(const AttachmentFunction& f, uint64_t horizon);

// Grammar: linear:<gamma>,<eta> | power:<a>,<b>,<c> | const:<c> | table:<v0>,<v1>,...
// Parses, then validates with the default horizon 1e7; throws ParseError on
// syntax errors and std::invalid_argument on validation failures.
AttachmentFunction parse_spec(const std::string& text);

inline constexpr uint64_t kDefaultValidationHorizon = 10'000'000;

}  // namespace pag
