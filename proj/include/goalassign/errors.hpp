#pragma once

#include <stdexcept>
#include <string>

namespace goalassign {

// Every error raised by the library derives from Error so callers (the CLI in
// particular) can separate domain failures from programming errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class MalformedFile : public Error {
 public:
  using Error::Error;
};

class RetryLimitExhausted : public Error {
 public:
  using Error::Error;
};

class InvalidSource : public Error {
 public:
  using Error::Error;
};

class NoPath : public Error {
 public:
  using Error::Error;
};

class IncompleteRanking : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class KTooLarge : public Error {
 public:
  using Error::Error;
};

class AgentFailure : public Error {
 public:
  using Error::Error;
};

class TimedOutEpisode : public Error {
 public:
  using Error::Error;
};

class MalformedResponse : public Error {
 public:
  using Error::Error;
};

class TransportFailure : public Error {
 public:
  using Error::Error;
};

class CredentialMissing : public Error {
 public:
  using Error::Error;
};

}  // namespace goalassign
