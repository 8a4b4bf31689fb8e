export function logLogin(userName, ipAddress) {
  console.log("login", userName, ipAddress);
}
