#pragma once
#include <stdexcept>
#include <string>

namespace twinbias {

// Failure categories.  Process exit codes group them: usage and input problems
// map to 1, checkpoint/state mismatches to 2, arithmetic/precision to 3.
enum class errkind {
  argument,    // bad flag value or parameter combination
  range,       // numeric precondition violated (domain errors included)
  validity,    // structurally invalid input object (e.g. degenerate family)
  resource,    // configured enumeration or size cap exceeded
  state,       // checkpoint mismatch, corrupt state file, wrong resume params
  arithmetic,  // overflow or an internally impossible intermediate
  precision,   // requested accuracy unreachable with configured caps
};

class error : public std::runtime_error {
 public:
  error(errkind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  errkind kind() const { return kind_; }

 private:
  errkind kind_;
};

[[noreturn]] inline void raise(errkind k, const std::string& msg) {
  throw error(k, msg);
}

inline const char* errkind_name(errkind k) {
  switch (k) {
    case errkind::argument: return "argument";
    case errkind::range: return "range";
    case errkind::validity: return "validity";
    case errkind::resource: return "resource";
    case errkind::state: return "state";
    case errkind::arithmetic: return "arithmetic";
    case errkind::precision: return "precision";
  }
  return "unknown";
}

inline int exit_code(errkind k) {
  switch (k) {
    case errkind::state: return 2;
    case errkind::arithmetic:
    case errkind::precision: return 3;
    default: return 1;
  }
}

}  // namespace twinbias
