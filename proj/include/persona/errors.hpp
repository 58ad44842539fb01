#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace persona {

// Base class for all library errors. Subclasses mark the failure category;
// the message carries the detail (offending id, line number, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- corpus ---------------------------------------------------------------

class InvalidCode : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateUser : public Error {
 public:
  explicit DuplicateUser(const std::string& id)
      : Error("duplicate user_id: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class UnknownUser : public Error {
 public:
  explicit UnknownUser(const std::string& id)
      : Error("tweet references unknown user_id: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class MissingType : public Error {
 public:
  explicit MissingType(const std::string& code)
      : Error("personality type has no records: " + code), code_(code) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class DegenerateClass : public Error {
 public:
  explicit DegenerateClass(const std::string& label)
      : Error("class would have an empty train split: " + label) {}
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class InvalidDate : public Error {
 public:
  using Error::Error;
};

// --- vectorize ------------------------------------------------------------

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("corpus is empty") {}
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

// --- embed ----------------------------------------------------------------

class EmptyVocabulary : public Error {
 public:
  EmptyVocabulary() : Error("no term meets the min_count threshold") {}
};

class UnknownTerm : public Error {
 public:
  explicit UnknownTerm(const std::string& term)
      : Error("term not in vocabulary: " + term), term_(term) {}
  const std::string& term() const { return term_; }

 private:
  std::string term_;
};

class EmptyQuery : public Error {
 public:
  EmptyQuery() : Error("similarity query has no terms") {}
};

// --- models ---------------------------------------------------------------

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingleClass : public Error {
 public:
  SingleClass() : Error("training data has fewer than 2 distinct labels") {}
};

class NegativeFeature : public Error {
 public:
  using Error::Error;
};

class EmptyTestSet : public Error {
 public:
  EmptyTestSet() : Error("test set is empty") {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

class CorruptModel : public Error {
 public:
  using Error::Error;
};

// --- sentiment ------------------------------------------------------------

class MissingClass : public Error {
 public:
  explicit MissingClass(const std::string& label)
      : Error("sentiment class absent from training data: " + label) {}
};

// --- analytics ------------------------------------------------------------

class EmptyLevel : public Error {
 public:
  using Error::Error;
};

class AbsentSide : public Error {
 public:
  using Error::Error;
};

}  // namespace persona
