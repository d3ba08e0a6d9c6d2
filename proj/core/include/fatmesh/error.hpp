#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fatmesh {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes, so new error kinds should derive from the closest category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class ProjectionError : public Error {
 public:
  ProjectionError(const std::string& what, Eigen::VectorXd last_iterate)
      : Error(what), last_iterate_(std::move(last_iterate)) {}
  const Eigen::VectorXd& last_iterate() const { return last_iterate_; }

 private:
  Eigen::VectorXd last_iterate_;
};

class SingularPointError : public Error {
 public:
  using Error::Error;
};

class ConnectivityError : public Error {
 public:
  using Error::Error;
};

class ScheduleInfeasibleError : public Error {
 public:
  ScheduleInfeasibleError(const std::string& what, std::size_t stage)
      : Error(what), stage_(stage) {}
  std::size_t stage() const { return stage_; }

 private:
  std::size_t stage_;
};

class EmptyRegionError : public Error {
 public:
  using Error::Error;
};

class DensityError : public Error {
 public:
  DensityError(const std::string& what, std::size_t site) : Error(what), site_(site) {}
  std::size_t site() const { return site_; }

 private:
  std::size_t site_;
};

class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class ExhaustionStallError : public Error {
 public:
  ExhaustionStallError(const std::string& what, std::size_t stage)
      : Error(what), stage_(stage) {}
  std::size_t stage() const { return stage_; }

 private:
  std::size_t stage_;
};

class MashError : public Error {
 public:
  using Error::Error;
};

// Wraps a failure raised while processing one exhaustion stage.
class StageError : public Error {
 public:
  StageError(std::size_t stage, const std::string& what)
      : Error("stage " + std::to_string(stage) + ": " + what), stage_(stage) {}
  std::size_t stage() const { return stage_; }

 private:
  std::size_t stage_;
};

// Configuration problems: bad values, unknown keys, unknown catalog names.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line) : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class MeshIoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fatmesh
