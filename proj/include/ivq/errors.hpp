#pragma once

#include <stdexcept>
#include <string>

namespace ivq {

// Exit-code buckets used by the CLI: validation -> 1, I/O -> 2, external -> 3.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExternalServiceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PlacementExhausted : ValidationError {
    explicit PlacementExhausted(const std::string& what) : ValidationError(what) {}
};

struct NoRelationAvailable : ValidationError {
    explicit NoRelationAvailable(const std::string& what) : ValidationError(what) {}
};

struct DegenerateWindow : ValidationError {
    explicit DegenerateWindow(const std::string& what) : ValidationError(what) {}
};

struct DistractorCollision : ValidationError {
    explicit DistractorCollision(const std::string& what) : ValidationError(what) {}
};

struct ValidationFailure : ValidationError {
    explicit ValidationFailure(const std::string& what) : ValidationError(what) {}
};

struct DuplicateQuestionId : ValidationError {
    explicit DuplicateQuestionId(const std::string& what) : ValidationError(what) {}
};

struct MissingStep : ValidationError {
    explicit MissingStep(const std::string& what) : ValidationError(what) {}
};

struct EmptyPool : ValidationError {
    explicit EmptyPool(const std::string& what) : ValidationError(what) {}
};

struct UncoveredInstance : ValidationError {
    explicit UncoveredInstance(const std::string& what) : ValidationError(what) {}
};

struct UnknownQuestionId : ValidationError {
    explicit UnknownQuestionId(const std::string& what) : ValidationError(what) {}
};

struct ConfigInvalid : ValidationError {
    explicit ConfigInvalid(const std::string& what) : ValidationError(what) {}
};

struct ManifestMismatch : ValidationError {
    explicit ManifestMismatch(const std::string& what) : ValidationError(what) {}
};

struct IoFailure : IoError {
    explicit IoFailure(const std::string& what) : IoError(what) {}
};

} // namespace ivq
