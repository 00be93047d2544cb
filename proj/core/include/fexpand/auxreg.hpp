#pragma once

#include "fexpand/expr.hpp"
#include "fexpand/laurent.hpp"

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace fex {

// First-order rule for one kernel: either D1(kernel) = rhs (explicit) or
// (D1(kernel))^2 = rhs (quadratic). rhs is marker-free.
struct AuxRule {
    bool quadratic = false;
    LaurentForm rhs;
};

// Polynomial identity kernel[eliminable]^2 = square_value; canonical forms
// keep the eliminable kernel to power <= 1.
struct AuxIdentity {
    std::size_t eliminable = 0;
    LaurentForm square_value;
};

// Closed-form description used by the verifier. Single-generator systems map
// every kernel into a Laurent form in one generator with an explicit rule;
// identity realizations keep the kernels as their own generators.
struct Realization {
    bool identity = false;
    Sym generator{};
    LaurentForm generator_rule; // D1(generator) in the {generator} basis
    std::map<Sym, LaurentForm> images;
};

class AuxSystem {
public:
    // name in {tanh, tan, exp, gprime-over-g, sinh-cosh, sin-cos,
    // hprime-invh, riccati, jacobi-sn-cn-dn}. Missing parameters default to
    // fresh modulus symbols; riccati rejects literal zero parameters.
    static AuxSystem builtin(const std::string& name,
                             const std::map<std::string, Rational>& params = {});
    static const std::vector<std::string>& builtin_names();

    // Assembles a system from explicit parts (used for verifier realizations
    // over named special functions).
    static AuxSystem custom(std::string name, std::vector<Sym> kernels,
                            std::vector<AuxRule> rules, std::vector<AuxIdentity> identities,
                            std::vector<Sym> modulus = {});

    const std::string& name() const { return name_; }
    const std::vector<Sym>& kernels() const { return kernels_; }
    std::size_t arity() const { return kernels_.size(); }
    const AuxRule& rule(std::size_t i) const { return rules_.at(i); }
    const std::vector<AuxIdentity>& identities() const { return identities_; }
    // Symbolic modulus parameters still present in the rules.
    const std::vector<Sym>& modulus_params() const { return modulus_syms_; }
    // Parameter value by declared name (resolved symbol or supplied rational).
    const ParamPoly& param(const std::string& declared) const;

    std::size_t kernel_index(Sym k) const;

    // D^k(kernel i) in the marker basis; memoized. k >= 1.
    LaurentForm dkernel(std::size_t i, int k) const;

    // Replaces markers of explicit-rule kernels by their rule rhs.
    LaurentForm apply_rules(const LaurentForm& f) const;
    // Product with marker-square reduction through the rules.
    LaurentForm mul(const LaurentForm& a, const LaurentForm& b) const;
    LaurentForm pow(const LaurentForm& a, unsigned e) const;
    // d/dxi of a form over this system's kernels.
    LaurentForm derivative(const LaurentForm& f) const;

    struct Canonical {
        LaurentForm form;
        // Power of each kernel the input was multiplied by to clear negative
        // exponents of eliminable kernels before identity reduction.
        std::vector<unsigned> cleared;
    };
    // Applies rules, clears eliminable denominators and reduces eliminable
    // squares through the identities. The result is a canonical
    // representative of (input * prod kernel^cleared).
    Canonical canonicalize(const LaurentForm& f) const;

    // Sound zero test in the quotient ring modulo the identities.
    bool is_zero(const LaurentForm& f) const;

    Realization realization() const;

    bool numeric_supported() const;
    // Kernel values at xi; symbolic modulus parameters are read from vals.
    std::vector<double> eval_kernels(double xi, const std::map<Sym, double>& vals = {}) const;

private:
    AuxSystem() = default;

    std::string name_;
    std::vector<Sym> kernels_;
    std::vector<AuxRule> rules_;
    std::vector<AuxIdentity> identities_;
    std::vector<Sym> modulus_syms_;
    std::map<std::string, ParamPoly> params_;

    struct Memo {
        std::map<std::pair<std::size_t, int>, LaurentForm> dk;
        std::shared_mutex mutex;
    };
    std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

// Eliminates every D^k marker with k >= 2 and every explicit-rule marker from
// e; quadratic-rule marker powers are reduced mod 2 through their rules.
Expr reduce_marker(const Expr& e, const AuxSystem& aux);

// Expression evaluation into the aux system's Laurent ring (marker-aware).
LaurentForm eval_aux(const Expr& e, const AuxSystem& aux);

} // namespace fex
