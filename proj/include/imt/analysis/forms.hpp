#pragma once

// Locating a newform in a modular symbol space by its coefficient-field degree
// and a few traces, and computing its Mazur-Tate invariants at a prime above p.

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imt/analysis/signed.hpp"
#include "imt/mazurtate/theta.hpp"

namespace imt {

struct FormSpec {
    std::string label;  // e.g. 27.4.a.b
    std::string alias;  // table name, e.g. G0N27k4A
    long level = 0;
    int weight = 0;
    std::string character = "trivial";
    int degree = 1;
    std::map<long, long> traces;  // trace of a_ell over the coefficient field
};

// one eigen-system of a sign space, summarized for selection
struct FormCandidate {
    int degree = 0;
    std::map<long, long> traces;
};

class ResolvedForm {
public:
    // throws NotFound when no system matches and SchemaMismatch when several do
    static ResolvedForm resolve(const FormSpec& spec, int sign = 1);
    static std::vector<FormCandidate> candidates(long level, int weight, const std::string& character,
                                                 std::vector<long> ells, int sign = 1);

    const FormSpec& spec() const { return spec_; }
    const EigenSymbol& symbol() const { return *symbol_; }

private:
    FormSpec spec_;
    std::shared_ptr<const ModSymSpace> space_;
    std::shared_ptr<const EigenSymbol> symbol_;
};

class FormAtPrime {
public:
    // prime_index is 1-based in the order of local factors
    FormAtPrime(const ResolvedForm& form, long p, int prime_index, int precision);

    long p() const { return p_; }
    int prime_index() const { return prime_index_; }
    int weight() const { return symbol_->weight(); }
    const NormalizedSymbol& phi() const { return phi_; }
    const LocalElem& a_p() const { return a_p_; }
    const LocalElem& eps_p() const { return eps_p_; }
    std::optional<mpq_class> slope() const;  // nullopt when a_p = 0
    long ramification() const { return phi_.local()->ram(); }
    const std::string& label() const { return label_; }

    ThetaElement theta(int n, int i = 0, int j = 0) const;
    std::vector<InvariantPoint> invariants(int n_max, int i = 0, int j = 0) const;

private:
    std::string label_;
    long p_;
    int prime_index_;
    std::shared_ptr<const EigenSymbol> symbol_;
    NormalizedSymbol phi_;
    LocalElem a_p_, eps_p_;
};

// slopes at the primes above p, in prime-index order
std::vector<std::optional<mpq_class>> prime_slopes(const ResolvedForm& form, long p, int precision);
// the unique prime index with the given slope (NotFound / SchemaMismatch otherwise)
int prime_index_for_slope(const ResolvedForm& form, long p, const std::optional<mpq_class>& slope, int precision);

std::string slope_string(const std::optional<mpq_class>& slope);
// "inf" or a rational
std::optional<mpq_class> parse_slope(const std::string& text);

}  // namespace imt
