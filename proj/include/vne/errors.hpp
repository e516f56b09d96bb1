#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vne {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientCpu : public Error {
 public:
  explicit InsufficientCpu(std::uint32_t node)
      : Error("insufficient CPU on substrate node " + std::to_string(node)), node_(node) {}
  std::uint32_t node() const noexcept { return node_; }

 private:
  std::uint32_t node_;
};

class InsufficientBandwidth : public Error {
 public:
  explicit InsufficientBandwidth(std::uint32_t link)
      : Error("insufficient bandwidth on substrate link " + std::to_string(link)), link_(link) {}
  std::uint32_t link() const noexcept { return link_; }

 private:
  std::uint32_t link_;
};

class InvalidMapping : public Error {
 public:
  using Error::Error;
};

class NotAllocated : public Error {
 public:
  explicit NotAllocated(std::uint64_t vnr)
      : Error("VNR " + std::to_string(vnr) + " has no active allocation"), vnr_(vnr) {}
  std::uint64_t vnr() const noexcept { return vnr_; }

 private:
  std::uint64_t vnr_;
};

class UnknownProfile : public Error {
 public:
  using Error::Error;
};

class DisconnectedVN : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class DegenerateSeries : public Error {
 public:
  using Error::Error;
};

class SolverPanic : public Error {
 public:
  SolverPanic(std::uint64_t vnr, const std::string& what)
      : Error("solver failed on VNR " + std::to_string(vnr) + ": " + what), vnr_(vnr) {}
  std::uint64_t vnr() const noexcept { return vnr_; }

 private:
  std::uint64_t vnr_;
};

}  // namespace vne
