/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <stdexcept>
#include <string>

namespace okc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define OKC_DEFINE_ERROR(Name)                  \
    class Name : public Error {                 \
      public:                                   \
        using Error::Error;                     \
    }

OKC_DEFINE_ERROR(DimensionError);
OKC_DEFINE_ERROR(InvalidInputError);
OKC_DEFINE_ERROR(DegenerateDataError);
OKC_DEFINE_ERROR(IllConditionedError);
OKC_DEFINE_ERROR(WindowUnderflowError);
OKC_DEFINE_ERROR(InsufficientDataError);
OKC_DEFINE_ERROR(UndefinedMetricError);
OKC_DEFINE_ERROR(SpecError);
OKC_DEFINE_ERROR(SchemaError);
OKC_DEFINE_ERROR(EmptyTargetError);
/// A file could not be opened, read or written.
OKC_DEFINE_ERROR(IoError);

#undef OKC_DEFINE_ERROR

/// Parse failure in an input file; carries the 1-based line number.
class FormatError : public Error {
  public:
    FormatError(const std::string &what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

}  // namespace okc
