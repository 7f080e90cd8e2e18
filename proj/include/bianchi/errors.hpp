#pragma once

#include <stdexcept>
#include <string>

namespace bianchi {

struct NotSquareFree : std::runtime_error {
    explicit NotSquareFree(const std::string& msg) : std::runtime_error(msg) {}
};
struct IdealPoint : std::runtime_error {
    explicit IdealPoint(const std::string& msg) : std::runtime_error(msg) {}
};
struct ResourceBudgetExceeded : std::runtime_error {
    explicit ResourceBudgetExceeded(const std::string& msg) : std::runtime_error(msg) {}
};
struct UnpairedFace : std::runtime_error {
    explicit UnpairedFace(const std::string& msg) : std::runtime_error(msg) {}
};
struct UnboundedSearch : std::runtime_error {
    explicit UnboundedSearch(const std::string& msg) : std::runtime_error(msg) {}
};
struct UnknownType : std::runtime_error {
    explicit UnknownType(const std::string& msg) : std::runtime_error(msg) {}
};
struct BoundaryCheckFailed : std::runtime_error {
    explicit BoundaryCheckFailed(const std::string& msg) : std::runtime_error(msg) {}
};
struct UnsupportedDegree : std::runtime_error {
    explicit UnsupportedDegree(const std::string& msg) : std::runtime_error(msg) {}
};
struct NotASubgroup : std::runtime_error {
    explicit NotASubgroup(const std::string& msg) : std::runtime_error(msg) {}
};
struct AssemblyAmbiguous : std::runtime_error {
    explicit AssemblyAmbiguous(const std::string& msg) : std::runtime_error(msg) {}
};
struct UnsupportedRing : std::runtime_error {
    explicit UnsupportedRing(const std::string& msg) : std::runtime_error(msg) {}
};
struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& msg) : std::runtime_error(msg) {}
};
struct UnknownArtifact : std::runtime_error {
    explicit UnknownArtifact(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bianchi
