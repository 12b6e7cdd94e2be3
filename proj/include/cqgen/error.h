// Copyright 2026 The cqgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CQGEN_ERROR_H_
#define CQGEN_ERROR_H_

#include <stdexcept>
#include <string>

namespace cqgen {

// Root of every error the library throws. Callers that only care about
// "something in cqgen failed" catch this; the subclasses below are the
// distinct failure kinds the pipeline reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or violated precondition (empty query, bad config, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// train_ngram on a corpus that yields no tokens.
class TrainingError : public Error {
 public:
  using Error::Error;
};

// Model file missing, truncated, or of an unknown version.
class ModelFormatError : public Error {
 public:
  using Error::Error;
};

// Remote LM transport failure or malformed response.
class RemoteScoringError : public Error {
 public:
  using Error::Error;
};

// External ranker transport failure or malformed response.
class RemoteRankingError : public Error {
 public:
  using Error::Error;
};

// select_final on an empty candidate list.
class EmptyCandidates : public Error {
 public:
  using Error::Error;
};

// Dataset file could not be opened.
class DatasetFileError : public Error {
 public:
  using Error::Error;
};

// Dataset line with the wrong column count or an empty field.
class DatasetParseError : public Error {
 public:
  DatasetParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Generations do not line up with dataset rows.
class EvaluationMismatch : public Error {
 public:
  using Error::Error;
};

// Wraps a per-row failure with the row id.
class RowError : public Error {
 public:
  RowError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

}  // namespace cqgen

#endif  // CQGEN_ERROR_H_
