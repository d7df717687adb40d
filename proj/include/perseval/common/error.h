#pragma once

#include <stdexcept>
#include <string>

namespace perseval {

// Error categories double as CLI exit codes.
enum class ErrorKind : int {
  kConfig = 1,
  kData = 2,
  kEndpoint = 3,
  kInternal = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error(ErrorKind::kConfig, m) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& m) : Error(ErrorKind::kData, m) {}
};

class SchemaError : public DataError {
 public:
  explicit SchemaError(const std::string& m) : DataError("schema error: " + m) {}
};

class IngestError : public DataError {
 public:
  explicit IngestError(const std::string& m) : DataError("ingestion error: " + m) {}
};

class SplitError : public DataError {
 public:
  explicit SplitError(const std::string& m) : DataError("split error: " + m) {}
};

class CoverageError : public DataError {
 public:
  explicit CoverageError(const std::string& m) : DataError("coverage error: " + m) {}
};

class FewShotError : public DataError {
 public:
  explicit FewShotError(const std::string& m) : DataError("few-shot error: " + m) {}
};

class JoinError : public DataError {
 public:
  explicit JoinError(const std::string& m) : DataError("join error: " + m) {}
};

class SerializationError : public DataError {
 public:
  explicit SerializationError(const std::string& m)
      : DataError("serialization error: " + m) {}
};

class IoError : public DataError {
 public:
  explicit IoError(const std::string& m) : DataError("i/o error: " + m) {}
};

class RenderError : public ConfigError {
 public:
  explicit RenderError(const std::string& m) : ConfigError("render error: " + m) {}
};

class UndefinedGainError : public DataError {
 public:
  explicit UndefinedGainError(const std::string& m) : DataError("undefined gain: " + m) {}
};

class EndpointError : public Error {
 public:
  EndpointError(int status, const std::string& m)
      : Error(ErrorKind::kEndpoint, m), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class RetryExhaustedError : public EndpointError {
 public:
  RetryExhaustedError(int last_status, const std::string& m)
      : EndpointError(last_status, m) {}
};

class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string& m)
      : Error(ErrorKind::kInternal, "training error: " + m) {}
};

}  // namespace perseval
