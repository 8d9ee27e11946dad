#ifndef BKQ_ERRORS_HPP
#define BKQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bkq {

// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation.
class domain_error : public error {
 public:
  explicit domain_error(const std::string& what) : error(what) {}
};

// Division by a vanishing density or ratio value.
class singularity_error : public error {
 public:
  explicit singularity_error(const std::string& what) : error(what) {}
};

// Operation not available for this family / functional form.
class unsupported_error : public error {
 public:
  explicit unsupported_error(const std::string& what) : error(what) {}
};

// A quantile schedule produced k outside [1, n-1] or is undefined at n.
class schedule_error : public error {
 public:
  explicit schedule_error(const std::string& what) : error(what) {}
};

// Rejection sampler exhausted its retry budget.
class retry_budget_error : public error {
 public:
  explicit retry_budget_error(const std::string& what) : error(what) {}
};

// Malformed or inconsistent experiment configuration.
class config_error : public error {
 public:
  explicit config_error(const std::string& what) : error(what) {}
};

}  // namespace bkq

#endif  // BKQ_ERRORS_HPP
