import bcrypt from "bcrypt";
import jwt from "jsonwebtoken";

const ROUNDS = 10;

export async function hashPassword(password) {
  return bcrypt.hash(password, ROUNDS);
}

export function issueToken(userId, secret) {
  return jwt.sign(userId, secret);
}
