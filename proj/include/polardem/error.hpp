// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace polardem {

enum class ErrorCode {
    InvalidDimensions,
    DimensionMismatch,
    IoError,
    UnsupportedFormat,
    EmptyMask,
    OddDimensions,
    DatasetError,
    InvalidParams,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidDimensions: return "InvalidDimensions";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::EmptyMask: return "EmptyMask";
        case ErrorCode::OddDimensions: return "OddDimensions";
        case ErrorCode::DatasetError: return "DatasetError";
        case ErrorCode::InvalidParams: return "InvalidParams";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace polardem
