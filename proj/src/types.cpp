#include "modelspace/types.hpp"

#include <Eigen/SVD>

namespace modelspace
{

std::string_view to_string(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::ZeroOnBoundary: return "ZeroOnBoundary";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::EmptySpec: return "EmptySpec";
    case ErrorCode::NonPositiveMass: return "NonPositiveMass";
    case ErrorCode::BadAngle: return "BadAngle";
    case ErrorCode::OutsideDisk: return "OutsideDisk";
    case ErrorCode::BadRadius: return "BadRadius";
    case ErrorCode::BadGridSize: return "BadGridSize";
    case ErrorCode::BadTruncation: return "BadTruncation";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InsufficientCoefficients: return "InsufficientCoefficients";
    case ErrorCode::BadIterationCount: return "BadIterationCount";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::EmptyModelSpace: return "EmptyModelSpace";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LambdaTooLarge: return "LambdaTooLarge";
    case ErrorCode::NotInModelSpace: return "NotInModelSpace";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Eigen::VectorXd singular_values(const ComplexMatrix& m)
{
    if (m.size() == 0)
    {
        return Eigen::VectorXd();
    }
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

double operator_norm(const ComplexMatrix& m)
{
    if (m.size() == 0)
    {
        return 0.0;
    }
    return singular_values(m)(0);
}

} // namespace modelspace
